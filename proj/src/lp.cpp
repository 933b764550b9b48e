#include "steiner/lp.hpp"

#include <fstream>
#include <sstream>

namespace steiner {

void dump_lp(const LinearProgram<Rat>& lp, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write LP dump " + path);
    bool lossy = false;
    auto dec = [&](const Rat& v) {
        if (!has_finite_decimal(v)) lossy = true;
        return rat_decimal(v, 18);
    };
    std::string body;
    {
        std::ostringstream os;
        os << (lp.sense == Sense::Min ? "Minimize" : "Maximize") << "\n obj:";
        for (int j = 0; j < lp.num_cols(); ++j)
            if (lp.obj[j] != 0) os << " + " << dec(lp.obj[j]) << ' ' << lp.col_names[j];
        os << "\nSubject To\n";
        for (const auto& row : lp.rows) {
            os << ' ' << row.name << ':';
            for (const auto& [j, c] : row.terms) os << " + " << dec(c) << ' ' << lp.col_names[j];
            os << (row.rel == Rel::Le ? " <= " : row.rel == Rel::Ge ? " >= " : " = ");
            os << dec(row.rhs) << '\n';
        }
        os << "Bounds\n";
        for (int j = 0; j < lp.num_cols(); ++j) os << ' ' << lp.col_names[j] << " >= 0\n";
        os << "End\n";
        body = os.str();
    }
    out << "\\ exact: " << (lossy ? "no (some coefficients truncated to decimals)" : "yes")
        << "\n" << body;
}

} // namespace steiner
