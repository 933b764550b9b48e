#include "steiner/partition.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace steiner {

Partition finest(int r) {
    Partition p;
    for (int i = 0; i < r; ++i) p.blocks.push_back(TermSet(1) << i);
    return p;
}

Partition coarsest(int r) {
    Partition p;
    p.blocks.push_back(full_set(r));
    return p;
}

Partition make_partition(int r, std::vector<TermSet> blocks) {
    TermSet seen = 0;
    for (TermSet b : blocks) {
        if (b == 0) throw UsageError("empty partition block");
        if (b & seen) throw UsageError("partition blocks overlap");
        seen |= b;
    }
    if (seen != full_set(r)) throw UsageError("partition blocks do not cover the terminal set");
    std::sort(blocks.begin(), blocks.end(),
              [](TermSet a, TermSet b) { return __builtin_ctz(a) < __builtin_ctz(b); });
    return Partition{std::move(blocks)};
}

Partition partition_from_assignment(const std::vector<int>& color) {
    int r = (int)color.size();
    std::vector<TermSet> by_id;
    for (int i = 0; i < r; ++i) {
        int c = color[i];
        if (c < 0) throw UsageError("negative block id");
        if ((int)by_id.size() <= c) by_id.resize(c + 1, 0);
        by_id[c] |= TermSet(1) << i;
    }
    std::vector<TermSet> blocks;
    for (TermSet b : by_id)
        if (b) blocks.push_back(b);
    return make_partition(r, std::move(blocks));
}

int rank(const Partition& p) { return p.rank(); }

bool refines(const Partition& fine, const Partition& coarse) {
    for (TermSet f : fine.blocks) {
        bool inside = false;
        for (TermSet c : coarse.blocks)
            if ((f & ~c) == 0) {
                inside = true;
                break;
            }
        if (!inside) return false;
    }
    return true;
}

bool crosses(const Partition& a, const Partition& b) {
    return !refines(a, b) && !refines(b, a);
}

Partition meet(const Partition& a, const Partition& b) {
    std::vector<TermSet> blocks;
    for (TermSet x : a.blocks)
        for (TermSet y : b.blocks)
            if (TermSet z = x & y) blocks.push_back(z);
    std::sort(blocks.begin(), blocks.end(),
              [](TermSet l, TermSet m) { return __builtin_ctz(l) < __builtin_ctz(m); });
    return Partition{std::move(blocks)};
}

Partition join(const Partition& a, const Partition& b) {
    TermSet all = 0;
    for (TermSet x : a.blocks) all |= x;
    int r = 0;
    while ((TermSet(1) << r) <= all && r < 32) ++r;
    std::vector<int> parent(r);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
        return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    auto unite_block = [&](TermSet blk) {
        int first = __builtin_ctz(blk);
        for (TermSet rest = blk & (blk - 1); rest; rest &= rest - 1)
            parent[find(__builtin_ctz(rest))] = find(first);
    };
    for (TermSet x : a.blocks) unite_block(x);
    for (TermSet y : b.blocks) unite_block(y);
    std::vector<int> color(r);
    for (int i = 0; i < r; ++i) color[i] = find(i);
    return partition_from_assignment(color);
}

Partition merge(const Partition& p, TermSet s) {
    std::vector<TermSet> blocks;
    TermSet merged = 0;
    for (TermSet b : p.blocks) {
        if (b & s)
            merged |= b;
        else
            blocks.push_back(b);
    }
    if (merged) blocks.push_back(merged);
    std::sort(blocks.begin(), blocks.end(),
              [](TermSet l, TermSet m) { return __builtin_ctz(l) < __builtin_ctz(m); });
    return Partition{std::move(blocks)};
}

int rank_contribution(TermSet k, const Partition& p) {
    int touched = 0;
    for (TermSet b : p.blocks) touched += (b & k) != 0;
    return touched == 0 ? 0 : touched - 1;
}

void enumerate_partitions(int r, const std::function<void(const Partition&)>& visit, int cap) {
    if (r < 1) throw UsageError("terminal count must be positive");
    if (r > cap)
        throw UsageError("partition enumeration capped at " + std::to_string(cap) +
                         " terminals; lower the terminal count");
    // Restricted growth strings: a[0]=0, a[i] <= 1 + max(a[0..i-1]).
    std::vector<int> a(r, 0);
    auto prefix_max = [&](int i) {
        int m = 0;
        for (int j = 0; j < i; ++j) m = std::max(m, a[j]);
        return m;
    };
    while (true) {
        visit(partition_from_assignment(a));
        int i = r - 1;
        while (i > 0 && a[i] > prefix_max(i)) --i;  // a[i] == prefix_max(i)+1: saturated
        if (i == 0) break;
        ++a[i];
        std::fill(a.begin() + i + 1, a.end(), 0);
    }
}

std::vector<Partition> all_partitions(int r, int cap) {
    std::vector<Partition> out;
    enumerate_partitions(r, [&](const Partition& p) { out.push_back(p); }, cap);
    return out;
}

UncrossReport check_uncrossing(const Partition& a, const Partition& b, TermSet k) {
    UncrossReport rep;
    Partition m = meet(a, b);
    rep.rank_lhs = (long)rank(a) * (rank(b) - 1) + (rank(a) - 1);
    rep.rank_rhs = rank(m) - 1;
    rep.rc_lhs = (long)rank(a) * rank_contribution(k, b) + rank_contribution(k, a);
    rep.rc_rhs = rank_contribution(k, m);
    for (TermSet blk : a.blocks) {
        Partition mb = merge(b, blk);
        rep.rank_rhs += rank(mb) - 1;
        rep.rc_rhs += rank_contribution(k, mb);
    }
    return rep;
}

std::string partition_str(const Partition& p) {
    std::ostringstream os;
    os << '{';
    for (size_t i = 0; i < p.blocks.size(); ++i) {
        if (i) os << '|';
        bool first = true;
        for (TermSet b = p.blocks[i]; b; b &= b - 1) {
            if (!first) os << ',';
            os << __builtin_ctz(b);
            first = false;
        }
    }
    os << '}';
    return os.str();
}

Partition partition_parse(int r, const std::string& text) {
    if (text.size() < 2 || text.front() != '{' || text.back() != '}')
        throw UsageError("partition literal must look like {0,1|2}");
    std::vector<TermSet> blocks;
    TermSet cur = 0;
    std::string num;
    auto flush_num = [&]() {
        if (num.empty()) throw UsageError("empty element in partition literal");
        int v = std::stoi(num);
        if (v < 0 || v >= r) throw UsageError("terminal index out of range in partition literal");
        cur |= TermSet(1) << v;
        num.clear();
    };
    for (size_t i = 1; i + 1 < text.size(); ++i) {
        char ch = text[i];
        if (ch >= '0' && ch <= '9')
            num += ch;
        else if (ch == ',')
            flush_num();
        else if (ch == '|') {
            flush_num();
            blocks.push_back(cur);
            cur = 0;
        } else
            throw UsageError("unexpected character in partition literal");
    }
    flush_num();
    blocks.push_back(cur);
    return make_partition(r, std::move(blocks));
}

} // namespace steiner
