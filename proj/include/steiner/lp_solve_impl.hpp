#pragma once

// Implementation of solve_exact / verify_solution.  Included by lp.hpp only.

#include <algorithm>
#include <optional>
#include <tuple>
#include <type_traits>

namespace steiner {
namespace lp_detail {

template <class F>
int sign_of(const F& v) {
    if constexpr (std::is_same_v<F, Rat>)
        return sgn(v);
    else
        return v.sign();
}

// Incremental exact row echelon; add() fully reduces the incoming row by the
// stored ones, so stored row k has zeros at the pivots of rows 0..k-1.
template <class F>
struct Echelon {
    int n;
    std::vector<std::vector<F>> rows;
    std::vector<int> pivots;
    std::vector<int> sources;

    explicit Echelon(int cols) : n(cols) {}

    bool add(std::vector<F> v, int source_id) {
        for (size_t k = 0; k < rows.size(); ++k) {
            const F& lead = v[pivots[k]];
            if (sign_of(lead) != 0) {
                F f = lead;  // rows are normalized to pivot 1
                for (int j = 0; j < n; ++j) v[j] -= f * rows[k][j];
            }
        }
        int p = -1;
        for (int j = 0; j < n; ++j)
            if (sign_of(v[j]) != 0) {
                p = j;
                break;
            }
        if (p < 0) return false;
        F inv = v[p];
        for (int j = 0; j < n; ++j) v[j] = v[j] / inv;
        rows.push_back(std::move(v));
        pivots.push_back(p);
        sources.push_back(source_id);
        return true;
    }

    int rank() const { return (int)rows.size(); }

    bool is_pivot_col(int j) const {
        return std::find(pivots.begin(), pivots.end(), j) != pivots.end();
    }

    // A nonzero vector in the null space, if rank < n.
    std::optional<std::vector<F>> null_vector() const {
        int free_col = -1;
        for (int j = 0; j < n && free_col < 0; ++j)
            if (!is_pivot_col(j)) free_col = j;
        if (free_col < 0) return std::nullopt;
        std::vector<F> d(n, F(0));
        d[free_col] = F(1);
        for (int k = (int)rows.size() - 1; k >= 0; --k) {
            F acc(0);
            for (int j = 0; j < n; ++j)
                if (j != pivots[k]) acc += rows[k][j] * d[j];
            d[pivots[k]] = -acc;  // pivot entry is 1
        }
        return d;
    }
};

// Dense two-phase primal simplex on  min cost'z : Az = b, z >= 0  with
// Bland's rule in both phases (no cycling, guaranteed termination).
template <class F>
struct Tableau {
    int m = 0;                         // constraint rows
    int ncols = 0;                     // total variables
    std::vector<std::vector<F>> a;     // m x (ncols+1), last column is b
    std::vector<F> cost;               // phase-2 costs
    std::vector<char> artificial;     // banned from entering
    std::vector<int> basis;            // basic variable per row
    std::vector<F> z;                  // reduced-cost row, z[ncols] = -objective

    void pivot(int row, int col) {
        F p = a[row][col];
        for (int j = 0; j <= ncols; ++j) a[row][j] = a[row][j] / p;
        for (int r = 0; r < m; ++r) {
            if (r == row) continue;
            F f = a[r][col];
            if (sign_of(f) == 0) continue;
            for (int j = 0; j <= ncols; ++j) a[r][j] -= f * a[row][j];
        }
        F f = z[col];
        if (sign_of(f) != 0)
            for (int j = 0; j <= ncols; ++j) z[j] -= f * a[row][j];
        basis[row] = col;
    }

    void price_out(const std::vector<F>& c) {
        z.assign(ncols + 1, F(0));
        for (int j = 0; j < ncols; ++j) z[j] = c[j];
        for (int r = 0; r < m; ++r) {
            F f = c[basis[r]];
            if (sign_of(f) == 0) continue;
            for (int j = 0; j <= ncols; ++j) z[j] -= f * a[r][j];
        }
    }

    // Returns false when the entering column proves unboundedness.
    bool iterate() {
        while (true) {
            int enter = -1;
            for (int j = 0; j < ncols; ++j)
                if (!artificial[j] && sign_of(z[j]) < 0) {
                    enter = j;
                    break;  // Bland: smallest improving index
                }
            if (enter < 0) return true;
            int leave = -1;
            for (int r = 0; r < m; ++r) {
                if (sign_of(a[r][enter]) <= 0) continue;
                if (leave < 0) {
                    leave = r;
                    continue;
                }
                F lhs = a[r][ncols] * a[leave][enter];
                F rhs = a[leave][ncols] * a[r][enter];
                int cmp = sign_of(F(lhs - rhs));
                if (cmp < 0 || (cmp == 0 && basis[r] < basis[leave])) leave = r;
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }
};

// Standard-form translation of a Min program plus the bookkeeping needed to
// read row duals out of the final reduced-cost row.
template <class F>
struct Assembled {
    Tableau<F> t;
    std::vector<int> marker;       // per LP row: column whose reduced cost encodes y
    std::vector<int> marker_sign;  // y_i = marker_sign * zbar(marker)
};

template <class F>
Assembled<F> assemble(const LinearProgram<F>& lp) {
    int m = lp.num_rows(), n = lp.num_cols();
    Assembled<F> out;
    Tableau<F>& t = out.t;
    t.m = m;
    out.marker.assign(m, -1);
    out.marker_sign.assign(m, 1);

    std::vector<std::vector<F>> dense(m, std::vector<F>(n, F(0)));
    std::vector<F> rhs(m, F(0));
    std::vector<Rel> rel(m);
    std::vector<int> flip(m, 1);
    for (int i = 0; i < m; ++i) {
        for (const auto& [j, c] : lp.rows[i].terms) dense[i][j] += c;
        rhs[i] = lp.rows[i].rhs;
        rel[i] = lp.rows[i].rel;
        if (sign_of(rhs[i]) < 0) {
            flip[i] = -1;
            rhs[i] = -rhs[i];
            for (F& c : dense[i]) c = -c;
            if (rel[i] == Rel::Le)
                rel[i] = Rel::Ge;
            else if (rel[i] == Rel::Ge)
                rel[i] = Rel::Le;
        }
    }

    int extra = 0;
    for (int i = 0; i < m; ++i) extra += rel[i] == Rel::Ge ? 2 : 1;
    t.ncols = n + extra;
    t.cost.assign(t.ncols, F(0));
    for (int j = 0; j < n; ++j) t.cost[j] = lp.obj[j];
    t.artificial.assign(t.ncols, 0);
    t.basis.assign(m, -1);
    t.a.assign(m, std::vector<F>(t.ncols + 1, F(0)));

    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) t.a[i][j] = dense[i][j];
        t.a[i][t.ncols] = rhs[i];
    }
    int next = n;
    for (int i = 0; i < m; ++i) {
        switch (rel[i]) {
            case Rel::Le: {
                t.a[i][next] = F(1);
                t.basis[i] = next;
                out.marker[i] = next;
                out.marker_sign[i] = -flip[i];
                ++next;
                break;
            }
            case Rel::Ge: {
                t.a[i][next] = F(-1);  // surplus
                out.marker[i] = next;
                out.marker_sign[i] = flip[i];
                ++next;
                t.a[i][next] = F(1);  // artificial
                t.artificial[next] = 1;
                t.basis[i] = next;
                ++next;
                break;
            }
            case Rel::Eq: {
                t.a[i][next] = F(1);  // artificial
                t.artificial[next] = 1;
                t.basis[i] = next;
                out.marker[i] = next;
                out.marker_sign[i] = -flip[i];
                ++next;
                break;
            }
        }
    }
    return out;
}

// Runs both phases; returns (primal x over LP columns, duals y over LP rows).
template <class F>
std::pair<std::vector<F>, std::vector<F>> run_simplex(const LinearProgram<F>& lp) {
    Assembled<F> as = assemble(lp);
    Tableau<F>& t = as.t;
    int n = lp.num_cols();

    bool need_phase1 = false;
    for (int j = 0; j < t.ncols; ++j) need_phase1 |= (bool)t.artificial[j];
    if (need_phase1) {
        std::vector<F> c1(t.ncols, F(0));
        for (int j = 0; j < t.ncols; ++j)
            if (t.artificial[j]) c1[j] = F(1);
        // Let artificials enter nothing, but they start basic so pricing is fine.
        t.price_out(c1);
        if (!t.iterate()) throw InvariantViolation("phase 1 cannot be unbounded");
        if (sign_of(t.z[t.ncols]) != 0) throw LpInfeasible(lp.rows.empty() ? "" : lp.rows[0].name);
        // Pivot remaining artificials out where possible; frozen rows are
        // redundant and keep dual zero automatically.
        for (int r = 0; r < t.m; ++r) {
            if (!t.artificial[t.basis[r]]) continue;
            for (int j = 0; j < t.ncols; ++j) {
                if (t.artificial[j]) continue;
                if (sign_of(t.a[r][j]) != 0) {
                    t.pivot(r, j);
                    break;
                }
            }
        }
    }
    t.price_out(t.cost);
    if (!t.iterate()) throw LpUnbounded("");

    std::vector<F> x(n, F(0));
    for (int r = 0; r < t.m; ++r)
        if (t.basis[r] < n) x[t.basis[r]] = t.a[r][t.ncols];
    std::vector<F> y(lp.num_rows(), F(0));
    for (int i = 0; i < lp.num_rows(); ++i) {
        F v = t.z[as.marker[i]];
        y[i] = as.marker_sign[i] > 0 ? v : F(-v);
    }
    return {std::move(x), std::move(y)};
}

// Dual program of a Min LP, with recovery maps back to the original.
template <class F>
struct DualBuild {
    LinearProgram<F> dual;           // Min form fed back to the solver
    std::vector<int> pos_col;        // per original row: column for y_i (+)
    std::vector<int> neg_col;        // column for -y_i (Le rows / Eq split)
};

template <class F>
DualBuild<F> build_dual(const LinearProgram<F>& lp) {
    DualBuild<F> out;
    LinearProgram<F>& d = out.dual;
    d.sense = Sense::Min;
    int m = lp.num_rows();
    out.pos_col.assign(m, -1);
    out.neg_col.assign(m, -1);
    for (int i = 0; i < m; ++i) {
        const auto& row = lp.rows[i];
        if (row.rel == Rel::Ge || row.rel == Rel::Eq)
            out.pos_col[i] = d.add_col("y+" + std::to_string(i), F(-row.rhs));
        if (row.rel == Rel::Le || row.rel == Rel::Eq)
            out.neg_col[i] = d.add_col("y-" + std::to_string(i), F(row.rhs));
    }
    std::vector<std::vector<std::pair<int, F>>> cols(lp.num_cols());
    for (int i = 0; i < m; ++i)
        for (const auto& [j, c] : lp.rows[i].terms) {
            if (out.pos_col[i] >= 0) cols[j].emplace_back(out.pos_col[i], c);
            if (out.neg_col[i] >= 0) cols[j].emplace_back(out.neg_col[i], F(-c));
        }
    for (int j = 0; j < lp.num_cols(); ++j)
        d.add_row("x" + std::to_string(j), std::move(cols[j]), Rel::Le, lp.obj[j]);
    return out;
}

// Moves x to a vertex of the optimal face (objective held fixed), adding at
// least one tight constraint per step.
template <class F>
void purify_to_vertex(const LinearProgram<F>& lp, std::vector<F>& x) {
    int n = lp.num_cols();
    for (int guard = 0; guard <= n + lp.num_rows() + 2; ++guard) {
        Echelon<F> ech(n);
        std::vector<F> objrow(lp.obj);
        ech.add(std::move(objrow), -1);
        std::vector<char> tight(lp.num_rows(), 0);
        for (int i = 0; i < lp.num_rows(); ++i) {
            F act = lp.row_activity(lp.rows[i], x);
            if (sign_of(F(act - lp.rows[i].rhs)) == 0) {
                tight[i] = 1;
                std::vector<F> v(n, F(0));
                for (const auto& [j, c] : lp.rows[i].terms) v[j] += c;
                ech.add(std::move(v), i);
            }
        }
        for (int j = 0; j < n; ++j)
            if (sign_of(x[j]) == 0) {
                std::vector<F> v(n, F(0));
                v[j] = F(1);
                ech.add(std::move(v), -2);
            }
        auto dir = ech.null_vector();
        if (!dir) return;  // full rank: x is a vertex
        std::vector<F> d = *dir;

        // Maximum step keeping feasibility; try +d, else -d.
        for (int attempt = 0; attempt < 2; ++attempt) {
            bool bounded = false;
            F best(0);
            auto consider = [&](const F& slack, const F& rate) {
                // constraint binds after slack/rate units
                if (sign_of(rate) <= 0) return;
                F step = slack / rate;
                if (!bounded || step < best) {
                    bounded = true;
                    best = step;
                }
            };
            for (int i = 0; i < lp.num_rows(); ++i) {
                if (tight[i]) continue;
                F act = lp.row_activity(lp.rows[i], x);
                F rate(0);
                for (const auto& [j, c] : lp.rows[i].terms) rate += c * d[j];
                if (lp.rows[i].rel == Rel::Ge)
                    consider(F(act - lp.rows[i].rhs), F(-rate));
                else if (lp.rows[i].rel == Rel::Le)
                    consider(F(lp.rows[i].rhs - act), rate);
                else
                    throw InvariantViolation("loose equality row during purification");
            }
            for (int j = 0; j < n; ++j)
                if (sign_of(x[j]) > 0) consider(x[j], F(-d[j]));
            if (bounded && sign_of(best) > 0) {
                for (int j = 0; j < n; ++j) x[j] += best * d[j];
                break;
            }
            if (attempt == 0)
                for (F& v : d) v = -v;
            else
                throw InvariantViolation("optimal face contains a line");
        }
    }
    throw InvariantViolation("purification did not converge");
}

} // namespace lp_detail

template <class F>
void verify_solution(const LinearProgram<F>& lp, const LpSolution<F>& sol) {
    using lp_detail::sign_of;
    int minmax = lp.sense == Sense::Min ? 1 : -1;
    for (int j = 0; j < lp.num_cols(); ++j)
        if (sign_of(sol.primal[j]) < 0)
            throw InvariantViolation("negative primal value at column " + lp.col_names[j]);
    F pobj(0);
    for (int j = 0; j < lp.num_cols(); ++j) pobj += lp.obj[j] * sol.primal[j];
    if (pobj != sol.objective) throw InvariantViolation("objective value mismatch");
    F dobj(0);
    for (int i = 0; i < lp.num_rows(); ++i) {
        const auto& row = lp.rows[i];
        F act = lp.row_activity(row, sol.primal);
        int cmp = sign_of(F(act - row.rhs));
        if ((row.rel == Rel::Ge && cmp < 0) || (row.rel == Rel::Le && cmp > 0) ||
            (row.rel == Rel::Eq && cmp != 0))
            throw InvariantViolation("primal violates row " + row.name);
        int ys = sign_of(sol.dual[i]) * minmax;
        if ((row.rel == Rel::Ge && ys < 0) || (row.rel == Rel::Le && ys > 0))
            throw InvariantViolation("dual sign wrong on row " + row.name);
        dobj += sol.dual[i] * row.rhs;
    }
    // Dual feasibility: reduced costs keep the objective's sign convention.
    std::vector<F> red(lp.obj);
    for (int i = 0; i < lp.num_rows(); ++i)
        for (const auto& [j, c] : lp.rows[i].terms) red[j] -= sol.dual[i] * c;
    for (int j = 0; j < lp.num_cols(); ++j)
        if (sign_of(red[j]) * minmax < 0)
            throw InvariantViolation("dual infeasible at column " + lp.col_names[j]);
    if (dobj != sol.objective) throw InvariantViolation("strong duality fails");
}

template <class F>
LpSolution<F> solve_exact(const LinearProgram<F>& lp, bool want_vertex) {
    using namespace lp_detail;
    if (lp.sense == Sense::Max) {
        LinearProgram<F> neg = lp;
        neg.sense = Sense::Min;
        for (F& c : neg.obj) c = -c;
        LpSolution<F> sol = solve_exact(neg, want_vertex);
        sol.objective = -sol.objective;
        for (F& y : sol.dual) y = -y;
        verify_solution(lp, sol);
        return sol;
    }

    std::vector<F> x, y;
    if (lp.num_rows() > lp.num_cols() + 8) {
        // Pivot on the transposed system: the dual's dual recovers x.
        DualBuild<F> db = build_dual(lp);
        std::vector<F> dx, du;
        try {
            std::tie(dx, du) = run_simplex(db.dual);
        } catch (const LpInfeasible&) {
            throw LpUnbounded("dual infeasible");
        } catch (const LpUnbounded&) {
            throw LpInfeasible("dual unbounded");
        }
        y.assign(lp.num_rows(), F(0));
        for (int i = 0; i < lp.num_rows(); ++i) {
            if (db.pos_col[i] >= 0) y[i] += dx[db.pos_col[i]];
            if (db.neg_col[i] >= 0) y[i] -= dx[db.neg_col[i]];
        }
        x.assign(lp.num_cols(), F(0));
        for (int j = 0; j < lp.num_cols(); ++j) x[j] = -du[j];
    } else {
        std::tie(x, y) = run_simplex(lp);
    }
    if (want_vertex) purify_to_vertex(lp, x);

    LpSolution<F> sol;
    sol.primal = std::move(x);
    sol.dual = std::move(y);
    sol.objective = F(0);
    for (int j = 0; j < lp.num_cols(); ++j) sol.objective += lp.obj[j] * sol.primal[j];
    for (int j = 0; j < lp.num_cols(); ++j)
        if (sign_of(sol.primal[j]) != 0) sol.support.push_back(j);
    Echelon<F> basis(lp.num_cols());
    for (int i = 0; i < lp.num_rows(); ++i) {
        F act = lp.row_activity(lp.rows[i], sol.primal);
        if (sign_of(F(act - lp.rows[i].rhs)) == 0) {
            sol.tight_rows.push_back(i);
            std::vector<F> v(lp.num_cols(), F(0));
            for (const auto& [j, c] : lp.rows[i].terms) v[j] += c;
            if (basis.add(std::move(v), i)) sol.basis_rows.push_back(i);
        }
    }
    for (int j = 0; j < lp.num_cols(); ++j)
        if (sign_of(sol.primal[j]) == 0) {
            std::vector<F> v(lp.num_cols(), F(0));
            v[j] = F(1);
            if (basis.add(std::move(v), -2)) sol.basis_zero_cols.push_back(j);
        }
    verify_solution(lp, sol);
    return sol;
}

} // namespace steiner
