#include "rys/gue.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "rys/fock.hpp"

#include "rys/symfunc.hpp"

namespace rys {

GueSpectrum sample_gue_spectrum(int k, std::mt19937_64& rng) {
    if (k < 1) throw std::invalid_argument("sample_gue_spectrum: k >= 1 required");
    std::normal_distribution<double> g(0.0, 1.0);
    const double s = std::sqrt(0.5);
    Eigen::MatrixXcd H(k, k);
    for (int i = 0; i < k; ++i) {
        H(i, i) = g(rng);
        for (int j = i + 1; j < k; ++j) {
            std::complex<double> z(s * g(rng), s * g(rng));
            H(i, j) = z;
            H(j, i) = std::conj(z);
        }
    }
    GueSpectrum out;
    out.k = k;
    if (k == 1) {
        out.eigenvalues = {H(0, 0).real()};
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    out.eigenvalues.resize(k);
    for (int i = 0; i < k; ++i) out.eigenvalues[i] = ev(k - 1 - i);
    return out;
}

GueSpectrum sample_gue_spectrum(int k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return sample_gue_spectrum(k, rng);
}

const GueReference& GueReference::get(int k, long draws, std::uint64_t seed) {
    static std::mutex mu;
    static std::map<std::tuple<int, long, std::uint64_t>, GueReference> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(k, draws, seed);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    GueReference ref;
    ref.k = k;
    ref.marginals.assign(k, std::vector<double>(draws));
    ref.mean.assign(k, 0.0);
    ref.second.assign(k, std::vector<double>(k, 0.0));
    std::mt19937_64 rng(seed);
    for (long d = 0; d < draws; ++d) {
        auto sp = sample_gue_spectrum(k, rng);
        for (int i = 0; i < k; ++i) {
            ref.marginals[i][d] = sp.eigenvalues[i];
            ref.mean[i] += sp.eigenvalues[i];
            for (int j = 0; j < k; ++j) ref.second[i][j] += sp.eigenvalues[i] * sp.eigenvalues[j];
        }
    }
    for (int i = 0; i < k; ++i) {
        std::sort(ref.marginals[i].begin(), ref.marginals[i].end());
        ref.mean[i] /= draws;
        for (int j = 0; j < k; ++j) ref.second[i][j] /= draws;
    }
    return cache.emplace(key, std::move(ref)).first->second;
}

double ks_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance: empty sample");
    std::size_t i = 0, j = 0;
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    double d = 0;
    while (i < a.size() && j < b.size()) {
        double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::fabs(i / na - j / nb));
    }
    return d;
}

double chi_square_pvalue(double statistic, double dof) {
    if (dof <= 0) return 1.0;
    boost::math::chi_squared_distribution<double> dist(dof);
    return boost::math::cdf(boost::math::complement(dist, std::max(statistic, 0.0)));
}

DensityCheck gue_pair_density_check(long draws, std::uint64_t seed, int bins) {
    if (draws < 1 || bins < 2) throw std::invalid_argument("gue_pair_density_check: bad arguments");
    boost::math::normal_distribution<double> normal;
    boost::math::chi_squared_distribution<double> chi3(3.0);
    std::vector<double> s_cut, d_cut;   // interior quantiles
    for (int i = 1; i < bins; ++i) {
        const double p = static_cast<double>(i) / bins;
        s_cut.push_back(boost::math::quantile(normal, p));
        d_cut.push_back(std::sqrt(boost::math::quantile(chi3, p)));
    }
    std::vector<long> counts(static_cast<std::size_t>(bins) * bins, 0);
    std::mt19937_64 rng(seed);
    for (long n = 0; n < draws; ++n) {
        auto g = sample_gue_spectrum(2, rng);
        const double e1 = g.eigenvalues[0], e2 = g.eigenvalues[1];
        const double sv = (e1 + e2) / std::sqrt(2.0), dv = (e1 - e2) / std::sqrt(2.0);
        const auto i = std::upper_bound(s_cut.begin(), s_cut.end(), sv) - s_cut.begin();
        const auto j = std::upper_bound(d_cut.begin(), d_cut.end(), dv) - d_cut.begin();
        ++counts[static_cast<std::size_t>(i) * bins + j];
    }
    DensityCheck out;
    out.draws = draws;
    out.cells = bins * bins;
    const double e = static_cast<double>(draws) / out.cells;
    for (long c : counts) out.statistic += (c - e) * (c - e) / e;
    out.pvalue = chi_square_pvalue(out.statistic, out.cells - 1);
    return out;
}

Eigen::MatrixXcd haar_unitary(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    const double s = std::sqrt(0.5);
    Eigen::MatrixXcd Z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Z(i, j) = std::complex<double>(s * g(rng), s * g(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Z);
    Eigen::MatrixXcd Q = qr.householderQ();
    const auto& R = qr.matrixQR();
    for (int j = 0; j < n; ++j) {
        std::complex<double> d = R(j, j);
        double m = std::abs(d);
        Q.col(j) *= m > 0 ? d / m : std::complex<double>(1.0);
    }
    return Q;
}

HcizReport hciz_check(const Partition& lambda, int N, std::vector<double> a, long mc_samples, std::uint64_t seed) {
    if (N < 1 || static_cast<int>(a.size()) != N) throw std::invalid_argument("hciz_check: need N values of a");
    if (static_cast<int>(lambda.length()) > N) throw std::invalid_argument("hciz_check: l(lambda) > N");
    HcizReport rep;
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            if (std::fabs(a[i] - a[j]) < 1e-9) {
                a[j] += 1e-3 * (j - i);
                rep.perturbed = true;
            }
    std::vector<Rational> ea;
    for (double v : a) ea.emplace_back(std::exp(v));
    rep.exact = to_double(schur(lambda, ea) / schur_principal(lambda, N));
    double pref = 1;
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) pref *= (a[i] - a[j]) / (std::exp(a[i]) - std::exp(a[j]));
    std::vector<double> b(N);
    for (int j = 1; j <= N; ++j) b[j - 1] = lambda[j] + N - j;
    rep.samples = mc_samples;
    if (N == 1) {
        rep.mc_mean = std::exp(a[0] * b[0]);
        rep.mc_stderr = 0;
        rep.z = std::fabs(rep.mc_mean - rep.exact) < 1e-12 * std::max(1.0, std::fabs(rep.exact)) ? 0.0 : INFINITY;
        return rep;
    }
    std::mt19937_64 rng(seed);
    double s = 0, s2 = 0;
    for (long n = 0; n < mc_samples; ++n) {
        auto U = haar_unitary(N, rng);
        double tr = 0;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) tr += std::norm(U(i, j)) * a[i] * b[j];
        double v = pref * std::exp(tr);
        s += v;
        s2 += v * v;
    }
    rep.mc_mean = s / mc_samples;
    double var = std::max(s2 / mc_samples - rep.mc_mean * rep.mc_mean, 0.0);
    rep.mc_stderr = std::sqrt(var / mc_samples);
    rep.z = rep.mc_stderr > 0 ? (rep.mc_mean - rep.exact) / rep.mc_stderr : 0.0;
    return rep;
}

// ---------------------------------------------------------------- limit measures

std::vector<Band> limit_bands(const PiecewiseBoundary& boundary, const WeightClasses& classes, int h) {
    if (h < 1 || h > classes.n()) throw std::invalid_argument("limit_bands: bad class");
    if (!boundary.classes_contiguous()) throw std::invalid_argument("limit_bands: classes do not own contiguous blocks");
    const int s = boundary.s();
    // d_i = first mu-index of class i; the classes must cover 1..s in order
    std::vector<int> d;
    int expect = 1;
    for (const auto& J : boundary.J) {
        if (J.empty() || J.front() != expect) throw std::invalid_argument("limit_bands: inconsistent band data");
        d.push_back(J.front());
        expect = J.back() + 1;
    }
    if (expect != s + 1) throw std::invalid_argument("limit_bands: inconsistent band data");
    const Rational theta = Rational(classes.size(h)) / boundary.N;
    if (theta <= 0) throw std::invalid_argument("limit_bands: empty class");
    const int di = d[h - 1];
    const int nb = static_cast<int>(boundary.J[h - 1].size());
    auto A = [&](int i) { return boundary.a.at(i - 1); };
    auto B = [&](int i) { return boundary.b.at(i - 1); };
    std::vector<Band> out;
    for (int k = 0; k < nb; ++k) {
        Rational beta = 0;
        for (int j = 1; j <= s - di - k; ++j) beta += (A(j + 1) - B(j)) / theta;
        for (int r = di; r <= di + k - 1; ++r) beta += (B(r) - A(r)) / theta;
        const int seg = s - di - k + 1;
        Band bd;
        bd.beta = beta;
        bd.gamma = beta + (B(seg) - A(seg)) / theta;
        bd.gamma_closed_form = (B(seg) - A(1)) / theta;
        out.push_back(bd);
    }
    // bands must not overlap
    std::vector<std::pair<Rational, Rational>> iv;
    for (const auto& b : out) iv.emplace_back(b.beta, b.gamma);
    std::sort(iv.begin(), iv.end());
    for (std::size_t i = 0; i < iv.size(); ++i) {
        if (iv[i].second < iv[i].first) throw std::invalid_argument("limit_bands: negative band");
        if (i + 1 < iv.size() && iv[i].second > iv[i + 1].first) throw std::invalid_argument("limit_bands: overlapping bands");
    }
    return out;
}

MeasureMoments limit_measure_moments(const PiecewiseBoundary& boundary, const WeightClasses& classes, int h,
                                     MomentMode mode) {
    if (h < 1 || h > classes.n()) throw std::invalid_argument("limit_measure_moments: bad class");
    MeasureMoments m;
    if (mode == MomentMode::Limit) {
        m.psi1 = 0;
        m.psi2 = 0;
        for (const auto& b : limit_bands(boundary, classes, h)) {
            m.psi1 += (b.gamma * b.gamma - b.beta * b.beta) / 2;
            m.psi2 += (b.gamma * b.gamma * b.gamma - b.beta * b.beta * b.beta) / 3;
        }
        return m;
    }
    // rows of the boundary, top to bottom
    std::vector<int> rows;
    const int s = boundary.s();
    for (int t = 1; t <= s; ++t)
        for (int q = 0; q < boundary.K[s - t]; ++q) rows.push_back(boundary.mu[t - 1]);
    int from = 0;
    for (int d = 1; d < h; ++d) from += classes.size(d);
    const int Nh = classes.size(h);
    if (Nh == 0) throw std::invalid_argument("limit_measure_moments: empty class");
    Rational s1 = 0, s2 = 0;
    for (int q = 1; q <= Nh; ++q) {
        Rational y = Rational(rows.at(from + q - 1) + Nh - q) / Nh;
        s1 += y;
        s2 += y * y;
    }
    m.psi1 = s1 / Nh;
    m.psi2 = s2 / Nh;
    return m;
}

RescalingConstants rescaling_constants(const RailYardModel& model, int t, int h, const MeasureMoments& psi,
                                       ConstantsVariant variant) {
    auto classes = WeightClasses::from_model(model);
    if (h < 1 || h > classes.n()) throw std::invalid_argument("rescaling_constants: bad class");
    RescalingConstants c;
    c.h = h;
    c.psi1 = psi.psi1;
    c.psi2 = psi.psi2;
    c.variant = variant;
    const double p1 = to_double(psi.psi1), p2 = to_double(psi.psi2);
    const double xs = to_double(classes.values[h - 1]);
    if (variant == ConstantsVariant::Displayed) {
        c.A = p1 - 0.5;
        c.B = p2 - p1 * p1;
        if (h == 1) {
            c.B -= 1.0 / 12.0;
            for (int i = model.l; i <= t; ++i) {
                if (model.kind(i) != kLPlus) continue;
                double q = model.weight_d(i) * xs;
                c.A += q / (1 - q) + q / (1 + q);
                c.B += q / ((1 + q) * (1 + q)) + q / ((1 - q) * (1 - q));
            }
        }
    } else {
        const double Nh = classes.size(h);
        c.A = p1 - 0.5;
        c.B = p2 - p1 * p1 - 1.0 / 12.0;
        for (int i = model.l; i <= t; ++i) {
            if (!model.kind(i).plus()) continue;
            double q = model.weight_d(i) * xs;
            if (model.kind(i).letter == Letter::L) {
                c.A += q / (1 - q) / Nh;
                c.B += q / ((1 - q) * (1 - q)) / Nh;
            } else {
                c.A += q / (1 + q) / Nh;
                c.B += q / ((1 + q) * (1 + q)) / Nh;
            }
        }
    }
    if (variant == ConstantsVariant::Displayed && h >= 2) {
        c.exact = true;
        c.A_exact = psi.psi1 - Rational(1, 2);
        c.B_exact = psi.psi2 - psi.psi1 * psi.psi1;
    }
    if (!(c.B > 0)) throw std::domain_error("rescaling_constants: B is not positive");
    return c;
}

double GueComparisonReport::max_ks() const { return ks.empty() ? 0.0 : *std::max_element(ks.begin(), ks.end()); }

std::vector<std::vector<double>> rescaled_coordinates(const std::vector<Partition>& at_t, int offset, int Nh,
                                                      const RescalingConstants& c, int k, const CompareOptions& opt) {
    const double sN = std::sqrt(static_cast<double>(Nh));
    const double scale = opt.norm == Normalization::Linear ? c.B : std::sqrt(c.B);
    std::vector<std::vector<double>> out(k, std::vector<double>(at_t.size()));
    for (std::size_t s = 0; s < at_t.size(); ++s)
        for (int i = 1; i <= k; ++i) {
            double q = at_t[s][offset + i] + (opt.displayed_shift ? Nh : k) - i;
            out[i - 1][s] = (q / sN - sN * c.A) / scale;
        }
    return out;
}

GueComparisonReport gue_compare(const std::vector<Partition>& at_t, int offset, int Nh, const RescalingConstants& c,
                                int k, const CompareOptions& opt) {
    if (at_t.size() < 2) throw std::invalid_argument("gue_compare: not enough samples");
    GueComparisonReport rep;
    rep.h = c.h;
    rep.k = k;
    rep.samples = static_cast<long>(at_t.size());
    rep.norm = opt.norm;
    const auto& ref = GueReference::get(k, opt.reference_draws);
    auto b = rescaled_coordinates(at_t, offset, Nh, c, k, opt);
    const double n = static_cast<double>(at_t.size());
    for (int i = 0; i < k; ++i) {
        double m = std::accumulate(b[i].begin(), b[i].end(), 0.0) / n;
        rep.mean.push_back(m);
        rep.mean_error.push_back(m - ref.mean[i]);
    }
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            double e = 0;
            for (std::size_t s = 0; s < at_t.size(); ++s) e += b[i][s] * b[j][s];
            rep.second_moment_error = std::max(rep.second_moment_error, std::fabs(e / n - ref.second[i][j]));
        }
    for (int i = 0; i < k; ++i) {
        std::sort(b[i].begin(), b[i].end());
        rep.ks.push_back(ks_distance(b[i], ref.marginals[i]));
    }
    return rep;
}

GueComparisonReport gue_compare(const std::vector<DimerSample>& samples, const RailYardModel& model, int t, int h,
                                const RescalingConstants& c, int k, const CompareOptions& opt) {
    auto classes = WeightClasses::from_model(model);
    if (h < 1 || h > classes.n()) throw std::invalid_argument("gue_compare: bad class");
    if (k < 1 || k > classes.size_after(h, t)) throw std::invalid_argument("gue_compare: k exceeds the class size after t");
    std::vector<Partition> at;
    at.reserve(samples.size());
    for (const auto& s : samples) at.push_back(s.at(t + 1));
    return gue_compare(at, classes.offset_after(h, t), classes.size(h), c, k, opt);
}

double correlation(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw std::invalid_argument("correlation: size mismatch");
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n, my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0 || syy == 0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

RailYardModel ladder_model(const LadderParams& p) {
    if (p.N % 2 || p.N < 2 * p.tail) throw std::invalid_argument("ladder_model: N must be even and >= 2*tail");
    const int N1 = p.N / 2, N2 = p.N / 2, M = p.plus_factor * p.N;
    const Rational b = p.a / p.ratio;
    std::string lr, sg;
    std::vector<Rational> w;
    auto add = [&](char s, const Rational& x, int count) {
        for (int i = 0; i < count; ++i) {
            lr += 'L';
            sg += s;
            w.push_back(x);
        }
    };
    add('-', p.a, N1 - p.tail);
    add('-', b, N2 - p.tail);
    add('+', p.y, M);
    add('-', p.a, p.tail);
    add('-', b, p.tail);
    std::vector<int> box(N1, p.N);
    return RailYardModel::make(lr, sg, w, Partition(box), Partition());
}

int ladder_split(const LadderParams& p) { return p.N - 2 * p.tail + p.plus_factor * p.N; }

std::string variant_name(ConstantsVariant v) { return v == ConstantsVariant::Displayed ? "displayed" : "consistent"; }
std::string norm_name(Normalization n) { return n == Normalization::Linear ? "B" : "sqrtB"; }

std::vector<LadderStep> run_ladder(const LadderConfig& cfg) {
    std::vector<LadderStep> out;
    for (int N : cfg.sizes) {
        LadderParams p = cfg.base;
        p.N = N;
        auto model = ladder_model(p);
        const int t = ladder_split(p);
        auto classes = WeightClasses::from_model(model);
        if (cfg.h < 1 || cfg.h > classes.n()) throw std::invalid_argument("run_ladder: bad class");
        if (cfg.k < 1 || cfg.k > classes.size_after(cfg.h, t))
            throw std::invalid_argument("run_ladder: k exceeds the class size after t");
        CoveringSampler sampler(model, TruncationPolicy::defaults(model));
        auto t0 = std::chrono::steady_clock::now();
        auto samples = sample_many(sampler, cfg.samples, cfg.seed + static_cast<std::uint64_t>(N), cfg.threads);
        LadderStep step;
        step.N = N;
        step.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::vector<Partition> at;
        at.reserve(samples.size());
        for (const auto& s : samples) at.push_back(s.at(t + 1));
        if (classes.n() >= 2) {
            std::vector<double> x, y;
            const int r1 = classes.offset_after(1, t) + 1, r2 = classes.offset_after(2, t) + 1;
            for (const auto& q : at) {
                x.push_back(q[r1]);
                y.push_back(q[r2]);
            }
            step.class_correlation = correlation(x, y);
        }
        auto pb = PiecewiseBoundary::from(model.left_boundary, classes.total(), classes);
        auto psi = limit_measure_moments(pb, classes, cfg.h, cfg.moments);
        for (auto v : {ConstantsVariant::Displayed, ConstantsVariant::Consistent})
            for (auto nm : {Normalization::Linear, Normalization::Sqrt}) {
                LadderRow row;
                row.N = N;
                row.variant = v;
                row.norm = nm;
                try {
                    auto c = rescaling_constants(model, t, cfg.h, psi, v);
                    row.A = c.A;
                    row.B = c.B;
                    CompareOptions o;
                    o.norm = nm;
                    o.reference_draws = cfg.reference_draws;
                    row.report = gue_compare(at, classes.offset_after(cfg.h, t), classes.size(cfg.h), c, cfg.k, o);
                } catch (const std::domain_error& e) {
                    row.error = e.what();
                }
                step.rows.push_back(row);
            }
        out.push_back(std::move(step));
    }
    return out;
}

}  // namespace rys
