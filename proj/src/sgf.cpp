#include "rys/sgf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <stdexcept>

#include "rys/symfunc.hpp"

namespace rys {

WeightClasses WeightClasses::from_model(const RailYardModel& model) {
    WeightClasses wc;
    for (int i = model.l; i <= model.r; ++i)
        if (model.kind(i) == kLMinus && std::find(wc.values.begin(), wc.values.end(), model.weight(i)) == wc.values.end())
            wc.values.push_back(model.weight(i));
    std::sort(wc.values.begin(), wc.values.end(), std::greater<Rational>());
    wc.columns.resize(wc.values.size());
    for (int i = model.l; i <= model.r; ++i) {
        if (model.kind(i) != kLMinus) continue;
        auto it = std::find(wc.values.begin(), wc.values.end(), model.weight(i));
        wc.columns[it - wc.values.begin()].push_back(i);
    }
    for (const auto& c : wc.columns) wc.sigma0.insert(wc.sigma0.end(), c.begin(), c.end());
    return wc;
}

int WeightClasses::class_of(int column) const {
    for (std::size_t h = 0; h < columns.size(); ++h)
        if (std::find(columns[h].begin(), columns[h].end(), column) != columns[h].end()) return static_cast<int>(h) + 1;
    return 0;
}

int WeightClasses::size_after(int h, int t) const {
    const auto& c = columns.at(h - 1);
    return static_cast<int>(std::count_if(c.begin(), c.end(), [t](int j) { return j > t; }));
}

int WeightClasses::offset_after(int h, int t) const {
    int s = 0;
    for (int d = 1; d < h; ++d) s += size_after(d, t);
    return s;
}

PiecewiseBoundary PiecewiseBoundary::from(const Partition& lambda, int N, const WeightClasses& classes) {
    if (static_cast<int>(lambda.length()) > N) throw std::invalid_argument("PiecewiseBoundary: l(lambda) > N");
    PiecewiseBoundary pb;
    pb.N = N;
    for (int i = 1; i <= N; ++i)
        if (pb.mu.empty() || pb.mu.back() != lambda[i]) pb.mu.push_back(lambda[i]);
    const int s = pb.s();
    pb.K.assign(s, 0);
    for (int i = 1; i <= N; ++i) {
        int t = static_cast<int>(std::find(pb.mu.begin(), pb.mu.end(), lambda[i]) - pb.mu.begin());   // mu_{t+1}
        pb.K[s - 1 - t] += 1;
    }
    auto om = [&](int j) { return static_cast<long>(lambda[N + 1 - j]) - (N + 1 - j); };
    int pos = 1;
    Rational cum = 0;
    for (int i = 1; i <= s; ++i) {
        pb.A.push_back(om(pos));
        pb.B.push_back(om(pos + pb.K[i - 1] - 1));
        pos += pb.K[i - 1];
        const int m = pb.mu[s - i];
        pb.a.push_back((m + cum) / Rational(N) - 1);
        cum += pb.K[i - 1];
        pb.b.push_back((m + cum) / Rational(N) - 1);
    }
    // rows 1..N are assigned to classes through sigma0 (class 1 takes the top rows)
    pb.J.assign(classes.n(), {});
    int row = 1;
    for (int h = 1; h <= classes.n(); ++h)
        for (int q = 0; q < classes.size(h); ++q, ++row) {
            int t = static_cast<int>(std::find(pb.mu.begin(), pb.mu.end(), lambda[row]) - pb.mu.begin()) + 1;
            if (std::find(pb.J[h - 1].begin(), pb.J[h - 1].end(), t) == pb.J[h - 1].end()) pb.J[h - 1].push_back(t);
        }
    return pb;
}

std::vector<long> PiecewiseBoundary::omega() const {
    std::vector<long> out;
    for (int i = 0; i < s(); ++i)
        for (long v = A[i]; v <= B[i]; ++v) out.push_back(v);
    return out;
}

bool PiecewiseBoundary::classes_contiguous() const {
    int last = 0;
    for (const auto& j : J) {
        if (j.empty()) continue;
        for (std::size_t q = 0; q < j.size(); ++q) {
            if (j[q] <= last && !(q == 0 && j[q] == last)) return false;
            if (q > 0 && j[q] != j[q - 1] + 1) return false;
        }
        if (j.front() < last) return false;
        last = j.back();
    }
    // a shared mu value between consecutive classes is not a disjoint split
    for (std::size_t h = 1; h < J.size(); ++h)
        if (!J[h].empty() && !J[h - 1].empty() && J[h].front() == J[h - 1].back()) return false;
    return true;
}

namespace {

void check_sgf_hypotheses(const RailYardModel& model, int t) {
    model.validate();
    if (t < model.l || t > model.r) throw std::out_of_range("sgf: t outside [l..r]");
    if (model.has_RMinus()) throw std::invalid_argument("sgf: model has an (R,-) column");
    if (!model.right_boundary.empty()) throw std::invalid_argument("sgf: right boundary must be empty");
    if (static_cast<int>(model.left_boundary.length()) > model.count(kLMinus))
        throw std::invalid_argument("sgf: left boundary longer than the number of (L,-) columns");
}

// xi_ij for a + column i <= t and an (L,-) column j > t carrying w
Rational xi_factor(Letter a, const Rational& xi, const Rational& w) {
    if (a == Letter::L) {
        Rational d = 1 - xi * w;
        if (d <= 0) throw std::domain_error("sgf: pole, x_i u_j >= 1 for a same-letter pair");
        return 1 / d;
    }
    return 1 + xi * w;
}

}  // namespace

std::vector<Rational> sgf_base_point(const RailYardModel& model, int t) {
    std::vector<Rational> u;
    for (int j = t + 1; j <= model.r; ++j)
        if (model.kind(j) == kLMinus) u.push_back(model.weight(j));
    return u;
}

Rational sgf_value(const RailYardModel& model, int t, const std::vector<Rational>& u) {
    check_sgf_hypotheses(model, t);
    std::vector<int> after;
    for (int j = t + 1; j <= model.r; ++j)
        if (model.kind(j) == kLMinus) after.push_back(j);
    if (u.size() != after.size()) throw std::invalid_argument("sgf: wrong number of u-points");
    std::vector<Rational> num(u.begin(), u.end()), den;
    for (int j = model.l; j <= t; ++j)
        if (model.kind(j) == kLMinus) num.push_back(model.weight(j));
    for (int j = model.l; j <= model.r; ++j)
        if (model.kind(j) == kLMinus) den.push_back(model.weight(j));
    Rational d = schur(model.left_boundary, den);
    if (d == 0) throw std::domain_error("sgf: s_lambda(x) vanishes");
    Rational v = schur(model.left_boundary, num) / d;
    for (int i = model.l; i <= t; ++i) {
        if (!model.kind(i).plus()) continue;
        for (std::size_t q = 0; q < after.size(); ++q) {
            const Rational& xj = model.weight(after[q]);
            v *= xi_factor(model.kind(i).letter, model.weight(i), u[q]);
            v /= pair_factor(model.kind(i).letter, Letter::L, model.weight(i), xj);
        }
    }
    return v;
}

Rational sgf_by_summation(const RailYardModel& model, int t, const std::vector<Rational>& u,
                          const TruncationPolicy& trunc) {
    check_sgf_hypotheses(model, t);
    auto x = sgf_base_point(model, t);
    if (u.size() != x.size()) throw std::invalid_argument("sgf: wrong number of u-points");
    auto law = boundary_schur_process(model, t + 1, trunc);
    Rational s = 0;
    for (const auto& [lam, p] : law.measure.entries) {
        if (lam.length() > x.size()) continue;   // zero mass anyway
        s += p * schur(lam, u) / schur(lam, x);
    }
    return s;
}

// ---------------------------------------------------------------- difference operators

namespace {

// Fornberg weights for the m-th derivative at 0 on integer offsets
std::vector<Rational> fd_weights(int m, const std::vector<int>& offsets) {
    const int n = static_cast<int>(offsets.size());
    std::vector<std::vector<Rational>> C(n, std::vector<Rational>(m + 1, 0));
    C[0][0] = 1;
    Rational c1 = 1, c4 = offsets[0];
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        Rational c2 = 1, c5 = c4;
        c4 = offsets[i];
        for (int j = 0; j < i; ++j) {
            Rational c3 = Rational(offsets[i] - offsets[j]);
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) C[i][k] = c1 * (k * C[i - 1][k - 1] - c5 * C[i - 1][k]) / c2;
                C[i][0] = -c1 * c5 * C[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) C[j][k] = (c4 * C[j][k] - k * C[j][k - 1]) / c3;
            C[j][0] = c4 * C[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<Rational> w(n);
    for (int j = 0; j < n; ++j) w[j] = C[j][m];
    return w;
}

struct Stencil {
    std::vector<int> offsets;
    std::vector<Rational> weights;   // for unit step
    int order = 2;                   // truncation order
};

const Stencil& stencil_for(int m) {
    static std::map<int, Stencil> cache;
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    Stencil s;
    int r = m / 2 + 2;
    for (int p = -r; p <= r; ++p) s.offsets.push_back(p);
    s.weights = fd_weights(m, s.offsets);
    int n = 2 * r + 1;
    s.order = n - m;
    if (s.order % 2) ++s.order;
    return cache.emplace(m, std::move(s)).first->second;
}

// Stirling numbers of the second kind
Rational stirling2(int k, int m) {
    std::vector<std::vector<long long>> S(k + 1, std::vector<long long>(k + 1, 0));
    S[0][0] = 1;
    for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= i; ++j) S[i][j] = j * S[i - 1][j] + S[i - 1][j - 1];
    return Rational(static_cast<long>(S[k][m]));
}

struct OpChain {
    const RailYardModel& model;
    int t;
    std::vector<int> var_class;   // class (1-based) of each u-variable
    std::vector<std::pair<int, int>> ops;   // (h, k), applied innermost first
    Rational h;                   // FD step
    long evals = 0;

    Rational conj(int hclass, const std::vector<Rational>& u) const {
        Rational w = 1;
        for (std::size_t p = 0; p < u.size(); ++p)
            for (std::size_t q = p + 1; q < u.size(); ++q)
                if (hclass == 0 || var_class[p] == hclass || var_class[q] == hclass) w *= u[p] - u[q];
        return w;
    }

    Rational level(int m, const std::vector<Rational>& u) {
        if (m == 0) {
            ++evals;
            return sgf_value(model, t, u);
        }
        const auto [hc, k] = ops[m - 1];
        const Rational w0 = conj(hc, u);
        if (w0 == 0) throw std::domain_error("difference operator: coincident points");
        auto inner = [&](const std::vector<Rational>& v) -> Rational { return conj(hc, v) * level(m - 1, v); };
        Rational total = 0;
        int count = 0;
        for (std::size_t j = 0; j < u.size(); ++j) {
            if (hc != 0 && var_class[j] != hc) continue;
            ++count;
            if (k == 0) continue;
            Rational acc = 0;
            for (int mm = 1; mm <= k; ++mm) {
                const Stencil& st = stencil_for(mm);
                auto deriv = [&](const Rational& step) -> Rational {
                    Rational d = 0;
                    std::vector<Rational> v = u;
                    for (std::size_t p = 0; p < st.offsets.size(); ++p) {
                        if (st.weights[p] == 0) continue;
                        v[j] = u[j] + st.offsets[p] * step;
                        d += st.weights[p] * inner(v);
                    }
                    return d / rpow(step, mm);
                };
                Rational d1 = deriv(h), d2 = deriv(h / 2);
                Rational f = rpow(Rational(2), st.order);
                Rational dr = (f * d2 - d1) / (f - 1);
                acc += stirling2(k, mm) * rpow(u[j], mm) * dr;
            }
            total += acc;
        }
        if (k == 0) return count * level(m - 1, u);
        return total / w0;
    }
};

// short decimal instead of the binary expansion keeps the rationals small
Rational exact_from_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return parse_rational(buf);
}

}  // namespace

MomentResult difference_operator_moment(const RailYardModel& model, int t, const std::vector<MomentTerm>& terms,
                                        const FdOptions& opts) {
    check_sgf_hypotheses(model, t);
    auto classes = WeightClasses::from_model(model);
    std::vector<int> var_class;
    std::vector<Rational> x;
    for (int j = t + 1; j <= model.r; ++j)
        if (model.kind(j) == kLMinus) {
            var_class.push_back(classes.class_of(j));
            x.push_back(model.weight(j));
        }
    std::vector<std::pair<int, int>> ops;
    for (const auto& term : terms) {
        if (term.h < 0 || term.h > classes.n()) throw std::invalid_argument("difference operator: bad class index");
        if (term.k < 0 || term.l < 0) throw std::invalid_argument("difference operator: negative power");
        for (int q = 0; q < term.l; ++q) ops.emplace_back(term.h, term.k);
    }
    MomentResult res;
    if (ops.empty()) {
        res.value = 1;
        return res;
    }
    if (x.empty()) {
        // no variables: every D with k >= 0 acts on a constant with an empty sum
        res.value = 0;
        return res;
    }
    // offsets splitting coincident points, symmetric inside each group of equal weights
    std::vector<Rational> delta(x.size(), 0);
    bool coincident = false;
    for (std::size_t p = 0; p < x.size(); ++p) {
        std::vector<std::size_t> grp;
        for (std::size_t q = 0; q < x.size(); ++q)
            if (x[q] == x[p]) grp.push_back(q);
        if (grp.size() > 1) coincident = true;
        std::size_t idx = std::find(grp.begin(), grp.end(), p) - grp.begin();
        delta[p] = Rational(2 * static_cast<long>(idx) - static_cast<long>(grp.size()) + 1, 2);
    }
    Rational xmin = *std::min_element(x.begin(), x.end());
    Rational eta0 = exact_from_double(opts.eta);
    Rational ratio = exact_from_double(opts.step_ratio);
    OpChain chain{model, t, var_class, ops, 0};
    auto at_eta = [&](const Rational& eta) -> Rational {
        std::vector<Rational> u(x.size());
        for (std::size_t p = 0; p < x.size(); ++p) u[p] = x[p] * (1 + eta * delta[p]);
        Rational scale = coincident ? eta * xmin : eta0 * xmin;
        chain.h = ratio * scale;
        return chain.level(static_cast<int>(ops.size()), u);
    };
    if (!coincident) {
        Rational v1 = at_eta(0);
        // compare against a coarser step for the stability flag
        Rational saved = ratio;
        ratio = saved * 4;
        Rational v2 = at_eta(0);
        ratio = saved;
        res.value = to_double(v1);
        res.disagreement = v1 == 0 ? to_double(abs(v2 - v1)) : std::fabs(to_double((v2 - v1) / v1));
    } else {
        // polynomial extrapolation eta -> 0 from eta0, eta0/2, eta0/4 (Neville)
        Rational e[3] = {eta0, eta0 / 2, eta0 / 4};
        Rational f[3];
        for (int q = 0; q < 3; ++q) f[q] = at_eta(e[q]);
        auto lin = [&](int p, int q) -> Rational { return (e[q] * f[p] - e[p] * f[q]) / (e[q] - e[p]); };
        Rational p01 = lin(0, 1), p12 = lin(1, 2);
        Rational p012 = (e[2] * p01 - e[0] * p12) / (e[2] - e[0]);
        res.value = to_double(p012);
        res.disagreement = p012 == 0 ? to_double(abs(p12 - p012)) : std::fabs(to_double((p12 - p012) / p012));
    }
    res.evaluations = chain.evals;
    res.unstable = res.disagreement > opts.tolerance;
    return res;
}

Rational exact_power_moment(const ExactMeasure& measure, const std::vector<int>& blocks,
                            const std::vector<MomentTerm>& terms) {
    int N = 0;
    for (int b : blocks) N += b;
    Rational total = 0;
    for (const auto& [lam, p] : measure.entries) {
        Rational v = 1;
        for (const auto& term : terms) {
            int from = 0, to = N;
            if (term.h > 0) {
                from = 0;
                for (int d = 1; d < term.h; ++d) from += blocks.at(d - 1);
                to = from + blocks.at(term.h - 1);
            }
            Rational s = 0;
            for (int i = from + 1; i <= to; ++i) s += rpow(Rational(lam[i] + N - i), term.k);
            v *= rpow(s, term.l);
        }
        total += p * v;
    }
    return total;
}

// ---------------------------------------------------------------- factorization

std::vector<SubMeasure> factor_submeasures(const RailYardModel& model, int t, const TruncationPolicy& trunc) {
    auto classes = WeightClasses::from_model(model);
    if (classes.n() == 0) throw std::invalid_argument("factor_submeasures: no (L,-) columns");
    if (static_cast<int>(model.left_boundary.length()) > classes.total())
        throw std::invalid_argument("factor_submeasures: left boundary longer than the number of (L,-) columns");
    std::vector<SubMeasure> out;
    int row = 0;
    for (int h = 1; h <= classes.n(); ++h) {
        SubMeasure sm;
        sm.h = h;
        std::vector<int> parts;
        for (int q = 0; q < classes.size(h); ++q) parts.push_back(model.left_boundary[row + q + 1]);
        row += classes.size(h);
        sm.left = Partition::from_sorted(parts);
        RailYardModel sub = model;
        sub.left_boundary = sm.left;
        for (int i = model.l; i <= model.r; ++i) {
            const bool in_h = classes.class_of(i) == h;
            if (h == 1) {
                if (model.kind(i) == kLMinus && !in_h) sub.weights[i - model.l] = 0;
            } else {
                sub.kinds[i - model.l].letter = Letter::L;
                if (!in_h) sub.weights[i - model.l] = 0;
            }
        }
        sm.model = sub;
        sm.row_from = classes.offset_after(h, t);
        sm.row_to = sm.row_from + classes.size_after(h, t);
        sm.law = boundary_schur_process(sub, t + 1, trunc);
        out.push_back(std::move(sm));
    }
    return out;
}

ExactMeasure block_law(const ExactMeasure& joint, int from, int to) {
    ExactMeasure out;
    for (const auto& [lam, p] : joint.entries) {
        std::vector<int> parts;
        for (int i = from + 1; i <= to; ++i) parts.push_back(lam[i]);
        out.add(Partition::from_sorted(parts), p);
    }
    out.dropped = joint.dropped;
    out.normalized = joint.normalized;
    return out;
}

double total_variation(const ExactMeasure& p, const ExactMeasure& q) {
    Rational s = 0;
    for (const auto& [lam, w] : p.entries) s += abs(w - q.at(lam));
    for (const auto& [lam, w] : q.entries)
        if (!p.entries.count(lam)) s += abs(w);
    return to_double(s) / 2;
}

// ---------------------------------------------------------------- dominance

double log_abs(const Rational& q) {
    if (q == 0) return -std::numeric_limits<double>::infinity();
    long en, ed;
    double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
    double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
    return std::log(std::fabs(mn)) - std::log(md) + (en - ed) * std::log(2.0);
}

ExactMoment exact_boundary_moment(const RailYardModel& model, int t, const std::vector<MomentTerm>& terms) {
    auto classes = WeightClasses::from_model(model);
    std::vector<int> blocks;
    for (int h = 1; h <= classes.n(); ++h) blocks.push_back(classes.size_after(h, t));
    ExactMoment out;
    // exact transfer sweeps meeting at lambda^(t+1), normalized by the exact partition function
    const Rational Z = partition_function(model);
    auto trunc = TruncationPolicy::defaults(model);
    for (int round = 0; round < 6; ++round) {
        ExactMeasure bra, ket, law;
        bra.add(model.left_boundary, 1);
        for (int i = model.l; i <= t; ++i) bra = apply_gamma_bra(model.kind(i), model.weight(i), bra, trunc);
        ket.add(model.right_boundary, 1);
        for (int i = model.r; i > t; --i) ket = apply_gamma(model.kind(i), model.weight(i), ket, trunc);
        for (const auto& [p, w] : bra.entries) {
            auto it = ket.entries.find(p);
            if (it != ket.entries.end()) law.add(p, w * it->second / Z);
        }
        double v = to_double(exact_power_moment(law, blocks, terms));
        out.dropped = to_double(1 - law.total());
        const bool settled = round > 0 && std::fabs(v - out.value) <= 1e-13 * std::max(1.0, std::fabs(v));
        out.value = v;
        if (settled) break;
        trunc.max_first_part += 16;
        if (model.count(kRPlus) + model.count(kRMinus) > 0) trunc.max_length += 16;
    }
    out.comparable = true;
    for (const auto& m : terms) out.comparable = out.comparable && (m.h == 0 || classes.n() <= 1);
    return out;
}

double dominance_gap(const Partition& lambda, const std::vector<Rational>& points) {
    std::vector<Rational> vals;
    for (const auto& x : points)
        if (std::find(vals.begin(), vals.end(), x) == vals.end()) vals.push_back(x);
    std::sort(vals.begin(), vals.end(), std::greater<Rational>());
    if (vals.size() <= 1) return std::numeric_limits<double>::infinity();
    std::vector<int> mult;
    for (const auto& v : vals) mult.push_back(static_cast<int>(std::count(points.begin(), points.end(), v)));
    PointMultiset pm(vals, mult);
    auto terms = coset_terms(lambda, pm);
    if (terms.empty()) throw std::invalid_argument("dominance_gap: l(lambda) exceeds the number of points");
    // the first enumerated coset is the sorted labelling, i.e. sigma0
    const double l0 = log_abs(terms.front().value);
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < terms.size(); ++i) gap = std::min(gap, l0 - log_abs(terms[i].value));
    return gap;
}

double dominance_gap(const RailYardModel& model) {
    std::vector<Rational> pts;
    for (int i = model.l; i <= model.r; ++i)
        if (model.kind(i) == kLMinus) pts.push_back(model.weight(i));
    return dominance_gap(model.left_boundary, pts);
}

}  // namespace rys
