#include "rys/gt_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rys {

long truncated_geometric(long lo, long hi, double q, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    if (hi >= 0 && hi <= lo) return lo;
    if (q <= 0) return lo;
    if (hi < 0) {
        if (q >= 1) throw std::domain_error("truncated_geometric: unbounded with q >= 1");
        double u = U(rng);
        return lo + static_cast<long>(std::floor(std::log1p(-u) / std::log(q)));
    }
    const long n = hi - lo + 1;
    if (std::fabs(q - 1.0) < 1e-14) return lo + std::min<long>(n - 1, static_cast<long>(U(rng) * n));
    bool flip = q > 1;
    double qq = flip ? 1.0 / q : q;
    double lq = std::log(qq);
    // P(j) ∝ qq^j, j = 0..n-1 ; inverse CDF
    double qn = std::exp(lq * static_cast<double>(n));
    double u = U(rng);
    double j = std::floor(std::log1p(-u * (1.0 - qn)) / lq);
    long jj = std::clamp<long>(static_cast<long>(j), 0, n - 1);
    return flip ? hi - jj : lo + jj;
}

bool GtChainSampler::applicable(const RailYardModel& model, std::string* why) {
    auto fail = [&](const char* m) {
        if (why) *why = m;
        return false;
    };
    if (!model.right_boundary.empty()) return fail("right boundary not empty");
    std::vector<Rational> vals;
    int minus = 0;
    for (int i = model.l; i <= model.r; ++i) {
        if (model.kind(i).letter != Letter::L) return fail("model has R columns");
        if (model.weight(i) <= 0) return fail("zero weights");
        if (model.kind(i).minus()) {
            ++minus;
            if (std::find(vals.begin(), vals.end(), model.weight(i)) == vals.end()) vals.push_back(model.weight(i));
        }
    }
    if (model.divergent()) return fail("divergent weights");
    if (static_cast<int>(model.left_boundary.length()) > minus) return fail("no covering (left boundary too long)");
    if (vals.size() > 2) return fail("more than two (L,-) weight values");
    if (vals.size() == 2) {
        Rational a = std::max(vals[0], vals[1]);
        int N1 = 0;
        for (int i = model.l; i <= model.r; ++i)
            if (model.kind(i).minus() && model.weight(i) == a) ++N1;
        int N2 = minus - N1;
        const auto& lam = model.left_boundary;
        if (N1 < N2) return fail("two classes need #(larger weight) >= #(smaller weight)");
        if (!lam.empty()) {
            if (static_cast<int>(lam.length()) != N1) return fail("left boundary must be a rectangle with N1 rows");
            for (int v : lam.parts())
                if (v != lam.first()) return fail("left boundary must be a rectangle with N1 rows");
        }
    }
    return true;
}

GtChainSampler::GtChainSampler(const RailYardModel& model) : model_(model) {
    std::string why;
    if (!applicable(model, &why)) throw std::invalid_argument("GtChainSampler: " + why);
    std::vector<double> vals;
    for (int i = model.l; i <= model.r; ++i)
        if (model.kind(i).minus()) {
            double x = model.weight_d(i);
            if (std::find(vals.begin(), vals.end(), x) == vals.end()) vals.push_back(x);
        }
    n_classes_ = static_cast<int>(vals.size());
    // pick the classes exactly (rational compare) to avoid float ties
    Rational a_exact = 0;
    for (int i = model.l; i <= model.r; ++i)
        if (model.kind(i).minus() && model.weight(i) > a_exact) a_exact = model.weight(i);
    std::vector<Step> aset, bset, plus;
    for (int i = model.l; i <= model.r; ++i) {
        Step s{model.kind(i), model.weight_d(i), i};
        if (model.kind(i).plus()) plus.push_back(s);
        else if (model.weight(i) == a_exact) aset.push_back(s);
        else bset.push_back(s);
    }
    N1_ = static_cast<int>(aset.size());
    N2_ = static_cast<int>(bset.size());
    mu_ = model.left_boundary.first();
    initial_ = aset;
    initial_.insert(initial_.end(), bset.begin(), bset.end());
    initial_.insert(initial_.end(), plus.begin(), plus.end());
    // bubble sort by column index; record the swap schedule
    std::vector<Step> seq = initial_;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
            if (seq[k].column > seq[k + 1].column) {
                std::swap(seq[k], seq[k + 1]);
                swaps_.push_back(static_cast<int>(k));
                swap_first_.emplace_back(seq[k].kind, seq[k].x);
                swap_second_.emplace_back(seq[k + 1].kind, seq[k + 1].x);
                changed = true;
            }
        }
    }
    if (n_classes_ == 2) {
        // discrete ensemble on c = 0..S-1, weight r^c (c + N1 - N2)!/c!
        S_ = mu_ + N2_;
        const double r = bset.front().x / aset.front().x;
        std::vector<double> logw(S_);
        for (int c = 0; c < S_; ++c)
            logw[c] = c * std::log(r) + std::lgamma(c + N1_ - N2_ + 1.0) - std::lgamma(c + 1.0);
        double mx = *std::max_element(logw.begin(), logw.end());
        const int m = N2_;
        basis_.assign(static_cast<std::size_t>(S_) * m, 0.0);
        std::vector<std::vector<double>> V;
        std::vector<double> v(S_);
        for (int c = 0; c < S_; ++c) v[c] = std::exp(0.5 * (logw[c] - mx));
        auto normalize = [](std::vector<double>& u) {
            double s = 0;
            for (double t : u) s += t * t;
            s = std::sqrt(s);
            for (double& t : u) t /= s;
            return s;
        };
        normalize(v);
        const double mid = 0.5 * (S_ - 1), half = std::max(0.5 * (S_ - 1), 1.0);
        for (int j = 0; j < m; ++j) {
            V.push_back(v);
            if (j + 1 == m) break;
            std::vector<double> u(S_);
            for (int c = 0; c < S_; ++c) u[c] = ((c - mid) / half) * v[c];
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& q : V) {
                    double d = 0;
                    for (int c = 0; c < S_; ++c) d += q[c] * u[c];
                    for (int c = 0; c < S_; ++c) u[c] -= d * q[c];
                }
            if (normalize(u) < 1e-300) throw std::runtime_error("GtChainSampler: ensemble basis degenerate");
            v = u;
        }
        for (int c = 0; c < S_; ++c)
            for (int j = 0; j < m; ++j) basis_[static_cast<std::size_t>(c) * m + j] = V[j][c];
    }
}

std::vector<long> GtChainSampler::corners_level(const std::vector<long>& x, std::mt19937_64& rng) {
    const int n = static_cast<int>(x.size());
    std::vector<long> out(std::max(n - 1, 0));
    if (n <= 1) return out;
    std::exponential_distribution<double> E(1.0);
    std::vector<double> w(n);
    double tot = 0;
    for (int j = 0; j < n; ++j) {
        w[j] = E(rng);
        tot += w[j];
    }
    for (double& t : w) t /= tot;
    std::vector<double> xd(x.begin(), x.end());
    for (int i = 0; i + 1 < n; ++i) {
        // root of sum_j w_j/(z - x_j) in (x_{i+1}, x_i)
        const long hiI = x[i], loI = x[i + 1];
        if (hiI - loI == 1) {
            out[i] = loI;
            continue;
        }
        // work in d = z - x_{i+1} for accuracy near the lower pole
        double a = 0.0, b = static_cast<double>(hiI - loI);
        auto eval = [&](double d, double& f, double& fp) {
            f = 0;
            fp = 0;
            for (int j = 0; j < n; ++j) {
                double diff = (xd[i + 1] - xd[j]) + d;
                double inv = 1.0 / diff;
                f += w[j] * inv;
                fp -= w[j] * inv * inv;
            }
        };
        double d = 0.5 * (a + b);
        for (int it = 0; it < 200; ++it) {
            double f, fp;
            eval(d, f, fp);
            if (f > 0) a = d;   // f decreasing in d
            else b = d;
            double nd = d - f / fp;
            if (!(nd > a && nd < b)) nd = 0.5 * (a + b);
            if (std::fabs(nd - d) < 1e-13 * std::max(1.0, std::fabs(d)) || b - a < 1e-12) {
                d = nd;
                break;
            }
            d = nd;
        }
        long fl = loI + static_cast<long>(std::floor(d));
        out[i] = std::clamp(fl, loI, hiI - 1);
    }
    return out;
}

std::vector<Partition> GtChainSampler::uniform_gt_down(const Partition& top, int levels, std::mt19937_64& rng) const {
    // returns the chain top = level `levels`, ..., level 0 = ∅
    std::vector<Partition> out;
    out.reserve(levels + 1);
    out.push_back(top);
    std::vector<long> x(levels);
    for (int i = 1; i <= levels; ++i) x[i - 1] = top[i] + levels - i;
    for (int n = levels; n >= 1; --n) {
        x = corners_level(x, rng);
        std::vector<int> parts(n - 1);
        for (int i = 1; i <= n - 1; ++i) parts[i - 1] = static_cast<int>(x[i - 1] - (n - 1 - i));
        out.push_back(Partition::from_sorted(std::move(parts)));
    }
    return out;
}

std::vector<int> GtChainSampler::sample_split_coordinates(std::mt19937_64& rng) const {
    const int m = N2_;
    std::vector<int> pts;
    if (m == 0) return pts;
    std::vector<double> phi = basis_;
    std::vector<double> p(S_, 0.0);
    for (int c = 0; c < S_; ++c) {
        double s = 0;
        for (int j = 0; j < m; ++j) s += phi[static_cast<std::size_t>(c) * m + j] * phi[static_cast<std::size_t>(c) * m + j];
        p[c] = s;
    }
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<double> v(m);
    for (int rank = m; rank >= 1; --rank) {
        double tot = 0;
        for (int c = 0; c < S_; ++c) tot += std::max(p[c], 0.0);
        double u = U(rng) * tot;
        int pick = -1;
        for (int c = 0; c < S_; ++c) {
            if (std::find(pts.begin(), pts.end(), c) != pts.end()) continue;
            u -= std::max(p[c], 0.0);
            if (u <= 0) {
                pick = c;
                break;
            }
        }
        if (pick < 0) {
            for (int c = S_ - 1; c >= 0; --c)
                if (std::find(pts.begin(), pts.end(), c) == pts.end() && p[c] > 0) {
                    pick = c;
                    break;
                }
        }
        pts.push_back(pick);
        if (rank == 1) break;
        // Householder: map row `pick` (first `rank` columns) onto the last column, then drop it
        for (int j = 0; j < rank; ++j) v[j] = phi[static_cast<std::size_t>(pick) * m + j];
        double nrm = 0;
        for (int j = 0; j < rank; ++j) nrm += v[j] * v[j];
        nrm = std::sqrt(nrm);
        // target e_{rank-1} * sign
        double alpha = v[rank - 1] >= 0 ? -nrm : nrm;
        v[rank - 1] -= alpha;
        double vn = 0;
        for (int j = 0; j < rank; ++j) vn += v[j] * v[j];
        if (vn > 0) {
            for (int c = 0; c < S_; ++c) {
                double* row = &phi[static_cast<std::size_t>(c) * m];
                double d = 0;
                for (int j = 0; j < rank; ++j) d += row[j] * v[j];
                d = 2.0 * d / vn;
                for (int j = 0; j < rank; ++j) row[j] -= d * v[j];
            }
        }
        for (int c = 0; c < S_; ++c) {
            double t = phi[static_cast<std::size_t>(c) * m + rank - 1];
            p[c] -= t * t;
        }
        p[pick] = 0;
    }
    std::sort(pts.begin(), pts.end(), std::greater<int>());
    return pts;
}

DimerSample GtChainSampler::sample(std::mt19937_64& rng) const {
    const int nminus = N1_ + N2_;
    const int ncol = model_.columns();
    std::vector<Partition> P;
    P.reserve(ncol + 1);
    if (n_classes_ <= 1) {
        P = uniform_gt_down(model_.left_boundary, nminus, rng);
    } else {
        auto c = sample_split_coordinates(rng);
        std::vector<int> nu(N2_);
        for (int i = 1; i <= N2_; ++i) nu[i - 1] = c[i - 1] - (N2_ - i);
        Partition nuP = Partition::from_sorted(nu);
        // a-phase via complements in the N1 x mu box
        std::vector<int> comp(N1_);
        for (int i = 1; i <= N1_; ++i) comp[i - 1] = mu_ - nuP[N1_ + 1 - i];
        auto theta = uniform_gt_down(Partition::from_sorted(comp), N1_, rng);   // theta[k] has level N1-k
        P.resize(N1_ + 1);
        for (int s = 0; s <= N1_; ++s) {
            const Partition& th = theta[N1_ - s];
            std::vector<int> kap(N1_);
            for (int i = 1; i <= N1_; ++i) kap[i - 1] = mu_ - th[N1_ + 1 - i];
            P[s] = Partition::from_sorted(std::move(kap));
        }
        auto bphase = uniform_gt_down(nuP, N2_, rng);
        for (int k = 1; k <= N2_; ++k) P.push_back(bphase[k]);
    }
    while (static_cast<int>(P.size()) < ncol + 1) P.push_back(Partition());
    // transpositions into model order
    std::vector<int> row;
    for (std::size_t s = 0; s < swaps_.size(); ++s) {
        const int k = swaps_[s];
        const Partition& kap = P[k];
        const Partition& nu = P[k + 2];
        auto [k1, x1] = swap_first_[s];
        auto [k2, x2] = swap_second_[s];
        const std::size_t rows = std::max(kap.length(), nu.length()) + 1;
        row.assign(rows, 0);
        double q = (k1.plus() ? x1 : 1.0 / x1) * (k2.plus() ? 1.0 / x2 : x2);
        for (std::size_t i = 1; i <= rows; ++i) {
            long lo, hi;   // hi < 0: unbounded
            constexpr long INF = -1;
            long lo1, hi1, lo2, hi2;
            if (k1.plus()) {
                lo1 = kap[i];
                hi1 = i == 1 ? INF : kap[i - 1];
            } else {
                lo1 = kap[i + 1];
                hi1 = kap[i];
            }
            if (k2.plus()) {
                lo2 = nu[i + 1];
                hi2 = nu[i];
            } else {
                lo2 = nu[i];
                hi2 = i == 1 ? INF : nu[i - 1];
            }
            lo = std::max(lo1, lo2);
            if (hi1 == INF) hi = hi2;
            else if (hi2 == INF) hi = hi1;
            else hi = std::min(hi1, hi2);
            if (hi != INF && hi < lo) throw std::logic_error("GtChainSampler: empty conditional interval");
            row[i - 1] = static_cast<int>(truncated_geometric(lo, hi, q, rng));
        }
        P[k + 1] = Partition::from_sorted(row);
    }
    return make_sample(model_, std::move(P));
}

}  // namespace rys
