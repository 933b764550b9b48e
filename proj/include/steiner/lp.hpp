#pragma once

#include <string>
#include <utility>
#include <vector>

#include "steiner/errors.hpp"
#include "steiner/quadratic.hpp"
#include "steiner/rational.hpp"

namespace steiner {

struct LpInfeasible : Error {
    explicit LpInfeasible(const std::string& w) : Error("LP infeasible: " + w) {}
};
struct LpUnbounded : Error {
    explicit LpUnbounded(const std::string& w) : Error("LP unbounded: " + w) {}
};

enum class Sense { Min, Max };
enum class Rel { Le, Ge, Eq };

/// Explicit constraint system with exact coefficients.  Columns and rows
/// carry names purely for reports and dumps.
template <class F>
struct LinearProgram {
    Sense sense = Sense::Min;
    std::vector<F> obj;
    std::vector<std::string> col_names;

    struct Row {
        std::vector<std::pair<int, F>> terms;  // (column, coefficient), column ascending
        Rel rel = Rel::Ge;
        F rhs;
        std::string name;
    };
    std::vector<Row> rows;

    int num_cols() const { return (int)obj.size(); }
    int num_rows() const { return (int)rows.size(); }

    int add_col(std::string name, F cost) {
        col_names.push_back(std::move(name));
        obj.push_back(std::move(cost));
        return num_cols() - 1;
    }
    void add_row(std::string name, std::vector<std::pair<int, F>> terms, Rel rel, F rhs) {
        rows.push_back(Row{std::move(terms), rel, std::move(rhs), std::move(name)});
    }

    F row_activity(const Row& row, const std::vector<F>& x) const {
        F s(0);
        for (const auto& [j, a] : row.terms) s += a * x[j];
        return s;
    }
};

/// Optimal basic solution plus dual vector, both substitution-verified.
/// Dual sign convention for a Min program: >= rows have y >= 0, <= rows have
/// y <= 0, equality rows are free (mirrored for Max).
template <class F>
struct LpSolution {
    std::vector<F> primal;
    std::vector<F> dual;
    F objective;
    std::vector<int> support;     // columns with nonzero primal value
    std::vector<int> tight_rows;  // rows satisfied with equality
    std::vector<int> basis_rows;  // independent tight rows defining the vertex
    std::vector<int> basis_zero_cols;  // zero coordinates completing the basis
};

/// Exact optimum via primal simplex with Bland's rule (guaranteed to
/// terminate).  When the program has many more rows than columns the solver
/// pivots on the transposed dual system instead and recovers both vectors;
/// either way the primal is purified to a vertex of the optimal face and
/// every reported quantity is re-verified by substitution before return.
template <class F>
LpSolution<F> solve_exact(const LinearProgram<F>& lp, bool want_vertex = true);

/// Substitution checks (primal and dual feasibility, strong duality); throws
/// InvariantViolation with the offending row or column on failure.
template <class F>
void verify_solution(const LinearProgram<F>& lp, const LpSolution<F>& sol);

/// Writes a textual LP-format dump.  Rationals are emitted as decimal
/// strings; the header flags the file as lossy when any value has no finite
/// decimal expansion.
void dump_lp(const LinearProgram<Rat>& lp, const std::string& path);

} // namespace steiner

#include "steiner/lp_solve_impl.hpp"
