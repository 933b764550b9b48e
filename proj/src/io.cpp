#include "steiner/io.hpp"

#include <fstream>
#include <sstream>

namespace steiner {

namespace {

struct LineReader {
    std::istream& in;
    std::string origin;
    int line_no = 0;

    // Next non-empty, non-comment line split into tokens.
    bool next(std::vector<std::string>& tokens) {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ss(line);
            tokens.clear();
            std::string tok;
            while (ss >> tok) tokens.push_back(tok);
            if (!tokens.empty()) return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw UsageError(origin + ":" + std::to_string(line_no) + ": " + what);
    }
};

int parse_index(LineReader& r, const std::string& tok, int bound) {
    try {
        size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size() || v < 0 || v >= bound) r.fail("vertex index '" + tok + "' out of range");
        return v;
    } catch (const UsageError&) {
        throw;
    } catch (...) {
        r.fail("malformed index '" + tok + "'");
    }
}

} // namespace

Instance parse_instance(std::istream& in, const std::string& origin) {
    LineReader r{in, origin};
    std::vector<std::string> tok;
    if (!r.next(tok)) r.fail("empty instance file");
    if (tok.size() != 4 || tok[0] != "steiner") r.fail("expected header 'steiner |V| |E| |R|'");
    int n, m, k;
    try {
        n = std::stoi(tok[1]);
        m = std::stoi(tok[2]);
        k = std::stoi(tok[3]);
    } catch (...) {
        r.fail("malformed header counts");
    }
    if (n <= 0 || m < 0 || k <= 0 || k > n) r.fail("inconsistent header counts");

    Instance g;
    g.n = n;
    g.terminal.assign(n, false);
    g.label.resize(n);
    for (int v = 0; v < n; ++v) g.label[v] = v;

    for (int i = 0; i < m; ++i) {
        if (!r.next(tok)) r.fail("expected " + std::to_string(m) + " edge lines");
        if (tok.size() != 4 || tok[0] != "e") r.fail("expected 'e u v cost'");
        Edge e;
        e.u = parse_index(r, tok[1], n);
        e.v = parse_index(r, tok[2], n);
        if (e.u == e.v) r.fail("self-loop");
        try {
            e.cost = rat_parse(tok[3]);
        } catch (const UsageError& err) {
            r.fail(err.what());
        }
        if (e.cost < 0) r.fail("negative edge cost");
        e.orig_id = (int)g.edges.size();
        g.edges.push_back(e);
    }
    if (!r.next(tok)) r.fail("expected a 'terminals' line");
    if (tok[0] != "terminals" || (int)tok.size() != k + 1)
        r.fail("expected 'terminals' followed by " + std::to_string(k) + " indices");
    for (int i = 1; i <= k; ++i) {
        int v = parse_index(r, tok[i], n);
        if (g.terminal[v]) r.fail("terminal listed twice");
        g.terminal[v] = true;
        if (i == 1) g.root = v;
    }
    if (r.next(tok)) r.fail("trailing content after the terminals line");
    validate(g);
    return g;
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open instance file " + path);
    return parse_instance(in, path);
}

std::string format_instance(const Instance& inst) {
    std::ostringstream os;
    os << "steiner " << inst.n << ' ' << inst.edges.size() << ' ' << inst.num_terminals() << '\n';
    for (const Edge& e : inst.edges)
        os << "e " << e.u << ' ' << e.v << ' ' << rat_str(e.cost) << '\n';
    os << "terminals " << inst.root;
    for (int v = 0; v < inst.n; ++v)
        if (inst.terminal[v] && v != inst.root) os << ' ' << v;
    os << '\n';
    return os.str();
}

void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write instance file " + path);
    out << format_instance(inst);
}

} // namespace steiner
