#include "rys/suites.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "rys/fock.hpp"
#include "rys/gue.hpp"
#include "rys/railyard.hpp"
#include "rys/sgf.hpp"
#include "rys/symfunc.hpp"

namespace rys {

namespace {

using json = nlohmann::json;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    return json::parse(in);
}

std::vector<std::pair<std::string, RailYardModel>> suite_models(const SuiteOptions& opt) {
    if (opt.model_paths.empty()) return reference_models();
    std::vector<std::pair<std::string, RailYardModel>> out;
    for (const auto& p : opt.model_paths) out.emplace_back(p, RailYardModel::load(p));
    return out;
}

// ---------------------------------------------------------------- commutation

std::vector<CheckResult> suite_commutation(const SuiteOptions&) {
    std::vector<CheckResult> out;
    const StepKind kinds[] = {kLPlus, kLMinus, kRPlus, kRMinus};
    TruncationPolicy trunc;
    trunc.max_first_part = 10;
    trunc.max_length = 10;
    for (auto k1 : kinds)
        for (auto k2 : kinds) {
            auto rep = verify_commutation(k1, k2, Rational(1, 3), Rational(1, 2), trunc);
            CheckResult c{"commutation", kind_name(k1) + " " + kind_name(k2), rep.ok, ""};
            c.detail = "factor " + rep.factor + ", kets " + std::to_string(rep.states) + ", coefficients " +
                       std::to_string(rep.coefficients) + ", max graded discrepancy " +
                       to_string(rep.max_graded_discrepancy) + ", evaluated discrepancy " +
                       fmt(to_double(rep.max_evaluated_discrepancy)) + " (omitted mass <= " +
                       fmt(to_double(rep.omitted_mass_bound)) + ")";
            out.push_back(c);
        }
    return out;
}

// ---------------------------------------------------------------- coset-schur

CheckResult coset_case(const Partition& lambda, const std::vector<Rational>& seq, const Rational* expected) {
    PointMultiset pts(seq);
    Rational lhs = schur_coset_formula(lambda, pts);
    Rational rhs = skew_schur(lambda, Partition(), seq);
    std::string label = lambda.str() + " @ [";
    for (std::size_t i = 0; i < seq.size(); ++i) label += (i ? "," : "") + to_string(seq[i]);
    label += "]";
    CheckResult c{"coset-schur", label, lhs == rhs, "coset " + to_string(lhs) + ", Jacobi-Trudi " + to_string(rhs)};
    if (expected) {
        c.pass = c.pass && lhs == *expected;
        c.detail += ", expected " + to_string(*expected);
    }
    return c;
}

std::vector<std::vector<int>> compositions(int n, int parts) {
    std::vector<std::vector<int>> out;
    if (parts == 1) return {{n}};
    for (int first = 1; first <= n - parts + 1; ++first)
        for (auto rest : compositions(n - first, parts - 1)) {
            rest.insert(rest.begin(), first);
            out.push_back(rest);
        }
    return out;
}

std::vector<CheckResult> suite_coset_schur(const SuiteOptions& opt) {
    std::vector<CheckResult> out;
    if (!opt.cases_path.empty()) {
        const json doc = read_json(opt.cases_path);
        for (const auto& cs : doc.at("cases")) {
            Partition lam = Partition::parse(cs.at("lambda").get<std::string>());
            std::vector<Rational> seq;
            for (const auto& p : cs.at("points")) seq.push_back(parse_rational(p.get<std::string>()));
            if (cs.contains("expected")) {
                Rational e = parse_rational(cs.at("expected").get<std::string>());
                out.push_back(coset_case(lam, seq, &e));
            } else {
                out.push_back(coset_case(lam, seq, nullptr));
            }
        }
        return out;
    }
    const std::vector<std::vector<Rational>> pools = {{Rational(1, 2), Rational(1, 3), Rational(3, 4)},
                                                      {Rational(2, 5), Rational(0), Rational(5, 3)}};
    auto lambdas = partitions_up_to(opt.max_size);
    long runs = 0, bad = 0;
    std::string first_bad;
    for (const auto& pool : pools)
        for (int n = 1; n <= 5; ++n)
            for (int d = 1; d <= std::min(3, n); ++d)
                for (const auto& comp : compositions(n, d)) {
                    std::vector<Rational> seq;
                    for (int b = 0; b < d; ++b)
                        for (int m = 0; m < comp[b]; ++m) seq.push_back(pool[b]);
                    for (const auto& lam : lambdas) {
                        auto c = coset_case(lam, seq, nullptr);
                        ++runs;
                        if (!c.pass) {
                            if (bad++ == 0) first_bad = c.name + ": " + c.detail;
                        }
                    }
                }
    out.push_back({"coset-schur", "exhaustive |lambda| <= " + std::to_string(opt.max_size) +
                                      ", <= 5 points, <= 3 values", bad == 0,
                   std::to_string(runs) + " cases, " + std::to_string(bad) + " mismatches" +
                       (bad ? " (first: " + first_bad + ")" : "")});
    return out;
}

// ---------------------------------------------------------------- l212

std::vector<CheckResult> suite_l212(const SuiteOptions& opt) {
    const std::vector<Rational> pool = {Rational(1, 2), Rational(1, 3), Rational(3, 4),
                                        Rational(2, 5), Rational(5, 7), Rational(1, 6)};
    auto lambdas = partitions_up_to(opt.max_size);
    long vanish_cases = 0, vanish_bad = 0, pad_cases = 0, pad_bad = 0;
    for (int N = 1; N <= 6; ++N)
        for (int b = 0; b <= N; ++b) {
            std::vector<Rational> pts(pool.begin(), pool.begin() + (N - b));
            std::vector<Rational> padded = pts;
            padded.insert(padded.end(), b, Rational(0));
            for (const auto& lam : lambdas) {
                if (static_cast<int>(lam.length()) > N) continue;
                const int zeros = N - static_cast<int>(lam.length());   // zero parts of lambda as a length-N tuple
                Rational v = skew_schur(lam, Partition(), padded);
                if (zeros < b) {
                    ++vanish_cases;
                    if (v != 0) ++vanish_bad;
                } else {
                    ++pad_cases;
                    if (v != skew_schur(lam, Partition(), pts)) ++pad_bad;
                }
            }
        }
    return {
        {"l212", "fewer zero parts than zero points gives 0", vanish_bad == 0,
         std::to_string(vanish_cases) + " cases, " + std::to_string(vanish_bad) + " nonzero"},
        {"l212", "dropping b zero points and b zero parts", pad_bad == 0,
         std::to_string(pad_cases) + " cases, " + std::to_string(pad_bad) + " mismatches"},
    };
}

// ---------------------------------------------------------------- charge

std::vector<CheckResult> suite_charge(const SuiteOptions& opt) {
    std::vector<CheckResult> out;
    for (const auto& [name, model] : suite_models(opt)) {
        CoveringSampler sampler(model, TruncationPolicy::defaults(model));
        auto samples = sample_many(sampler, opt.samples, opt.seed, opt.threads);
        long bad = 0;
        for (const auto& s : samples) {
            const int c0 = charge(s, model.l);
            for (int m = model.l + 1; m <= model.r + 1; ++m)
                if (charge(s, m) != c0) {
                    ++bad;
                    break;
                }
        }
        out.push_back({"charge", name, bad == 0,
                       std::to_string(samples.size()) + " samples, " + std::to_string(bad) + " with varying charge"});
    }
    return out;
}

// ---------------------------------------------------------------- hciz

struct HcizCase {
    Partition lambda;
    int N;
    std::vector<double> a;
};

std::vector<HcizCase> default_hciz_cases() {
    return {
        {Partition(), 2, {0.3, -0.2}},
        {Partition{2}, 1, {0.4}},
        {Partition{1}, 2, {0.5, -0.1}},
        {Partition{2, 1}, 2, {0.4, -0.3}},
        {Partition{1}, 3, {0.2, 0.1, -0.3}},
        {Partition{2, 1}, 3, {0.3, 0.0, -0.2}},
        {Partition{1, 1}, 3, {0.25, -0.15, 0.05}},
    };
}

std::vector<CheckResult> suite_hciz(const SuiteOptions& opt) {
    std::vector<HcizCase> cases;
    if (!opt.cases_path.empty()) {
        const json doc = read_json(opt.cases_path);
        for (const auto& cs : doc.at("cases"))
            cases.push_back({Partition::parse(cs.at("lambda").get<std::string>()), cs.at("N").get<int>(),
                             cs.at("a").get<std::vector<double>>()});
    } else {
        cases = default_hciz_cases();
    }
    std::vector<CheckResult> out;
    std::uint64_t k = 0;
    for (const auto& cs : cases) {
        auto rep = hciz_check(cs.lambda, cs.N, cs.a, opt.hciz_samples, opt.seed + 7919 * k++);
        std::string label = cs.lambda.str() + " N=" + std::to_string(cs.N);
        out.push_back({"hciz", label, std::fabs(rep.z) < 3,
                       "exact " + fmt(rep.exact) + ", mc " + fmt(rep.mc_mean) + " +- " + fmt(rep.mc_stderr) + ", z " +
                           fmt(rep.z) + (rep.perturbed ? " (ties split)" : "")});
    }
    return out;
}

// ---------------------------------------------------------------- bands

struct BandCase {
    std::vector<int> mu, K, owner;   // blocks from the top: value, multiplicity, class
};

std::vector<CheckResult> suite_bands(const SuiteOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    long cases = 0, width_bad = 0, mass_bad = 0, single_bad = 0, closed_agree = 0, closed_total = 0;
    for (int it = 0; it < 200; ++it) {
        // random piecewise data: s blocks, grouped top-down into contiguous classes
        const int s = 1 + static_cast<int>(rng() % 4);
        BandCase bc;
        int v = static_cast<int>(rng() % 3);
        std::vector<int> vals;
        for (int t = 0; t < s; ++t) {
            vals.push_back(v);
            v += 1 + static_cast<int>(rng() % 4);
        }
        int cls = 1;
        for (int t = 0; t < s; ++t) {
            bc.mu.push_back(vals[s - 1 - t]);
            bc.K.push_back(1 + static_cast<int>(rng() % 4));
            if (t > 0 && rng() % 2) ++cls;
            bc.owner.push_back(cls);
        }
        std::vector<int> rows;
        WeightClasses wc;
        wc.values.clear();
        int col = 1;
        for (int h = 1; h <= cls; ++h) {
            wc.values.push_back(Rational(1, h + 1));
            wc.columns.emplace_back();
            for (int t = 0; t < s; ++t)
                if (bc.owner[t] == h)
                    for (int q = 0; q < bc.K[t]; ++q) {
                        rows.push_back(bc.mu[t]);
                        wc.columns.back().push_back(col);
                        wc.sigma0.push_back(col++);
                    }
        }
        const int N = static_cast<int>(rows.size());
        auto pb = PiecewiseBoundary::from(Partition::from_sorted(rows), N, wc);
        ++cases;
        // independent a_i, b_i (ascending block order)
        std::vector<Rational> a(s + 1), b(s + 1);
        int below = 0;
        for (int i = 1; i <= s; ++i) {
            const int t = s - i;   // block index from the top
            a[i] = Rational(bc.mu[t] + below) / N - 1;
            below += bc.K[t];
            b[i] = Rational(bc.mu[t] + below) / N - 1;
        }
        for (int h = 1; h <= cls; ++h) {
            std::vector<Band> bands;
            int nblocks = 0;
            for (int t = 0; t < s; ++t) nblocks += bc.owner[t] == h;
            try {
                bands = limit_bands(pb, wc, h);
            } catch (const std::invalid_argument&) {
                if (nblocks == 1) ++single_bad;
                continue;
            }
            const Rational theta = Rational(wc.size(h)) / N;
            int d = 1;
            while (bc.owner[d - 1] != h) ++d;
            Rational total = 0;
            for (int k = 0; k < static_cast<int>(bands.size()); ++k) {
                const int seg = s - d - k + 1;
                if (bands[k].gamma - bands[k].beta != (b[seg] - a[seg]) / theta) ++width_bad;
                total += bands[k].gamma - bands[k].beta;
                ++closed_total;
                if (bands[k].gamma == (b[seg] - a[1]) / theta) ++closed_agree;
            }
            if (total != 1) ++mass_bad;
        }
    }
    std::vector<CheckResult> out = {
        {"bands", "gamma - beta = (b - a)/theta", width_bad == 0,
         std::to_string(cases) + " random boundaries, " + std::to_string(width_bad) + " mismatches"},
        {"bands", "total band length 1", mass_bad == 0, std::to_string(mass_bad) + " classes off"},
        {"bands", "single-block classes give disjoint bands", single_bad == 0,
         std::to_string(single_bad) + " rejected"},
    };
    // empty-boundary class h >= 2: A = 0, B = 1/12 exactly
    {
        auto model = RailYardModel::make("LLLLLL", "--+---",
                                         {Rational(1, 2), Rational(1, 2), Rational(1, 3), Rational(1, 2),
                                          Rational(1, 16), Rational(1, 16)},
                                         Partition{2, 2, 2});
        auto wc = WeightClasses::from_model(model);
        auto pb = PiecewiseBoundary::from(model.left_boundary, wc.total(), wc);
        auto psi = limit_measure_moments(pb, wc, 2, MomentMode::Limit);
        auto c = rescaling_constants(model, 3, 2, psi, ConstantsVariant::Displayed);
        out.push_back({"bands", "empty-boundary class: (A,B) = (0, 1/12)",
                       c.exact && c.A_exact == 0 && c.B_exact == Rational(1, 12),
                       "A " + to_string(c.A_exact) + ", B " + to_string(c.B_exact)});
    }
    out.push_back({"bands", "closed form (b_{s-d-k+1} - a_1)/theta (informational)", true,
                   std::to_string(closed_agree) + " of " + std::to_string(closed_total) + " bands agree"});
    return out;
}

// ---------------------------------------------------------------- sampler

std::vector<CheckResult> suite_sampler(const SuiteOptions& opt) {
    std::vector<CheckResult> out;
    for (const auto& [name, model] : suite_models(opt)) {
        auto r = sampler_chi_square(model, opt.samples, opt.seed, opt.threads);
        out.push_back({"sampler", name, r.pvalue > 0.001,
                       "chi2 " + fmt(r.statistic) + " on " + std::to_string(r.dof) + " dof, p " + fmt(r.pvalue) +
                           ", unlisted mass " + fmt(r.unlisted_mass)});
    }
    return out;
}

std::string chain_key(const DimerSample& s) {
    std::string k;
    for (const auto& p : s.partitions) k += p.str();
    return k;
}

}  // namespace

std::vector<std::pair<std::string, RailYardModel>> reference_models() {
    auto R = [](long p, long q) { return Rational(p, q); };
    return {
        {"sampler_llll", RailYardModel::make("LLLL", "+-+-", {R(1, 2), R(1, 2), R(1, 3), R(1, 2)})},
        {"sampler_mixed", RailYardModel::make("LRLR", "++--", {R(1, 2), R(1, 3), R(2, 5), R(1, 4)})},
        {"sampler_rl", RailYardModel::make("RLRLL", "++-+-", {R(1, 3), R(1, 2), R(1, 2), R(1, 4), R(2, 5)})},
        {"sampler_boundary",
         RailYardModel::make("LLLL", "--+-", {R(1, 2), R(1, 3), R(1, 2), R(2, 5)}, Partition{2, 1})},
        {"sampler_two_class", RailYardModel::make("LLLLLL", "--++--",
                                                  {R(1, 2), R(1, 8), R(1, 2), R(1, 2), R(1, 2), R(1, 8)},
                                                  Partition{1, 1})},
    };
}

ChiSquareResult sampler_chi_square(const RailYardModel& model, long draws, std::uint64_t seed, int threads, int cap) {
    const Rational Z = partition_function(model);
    auto en = enumerate_coverings(model, cap);
    std::map<std::string, double> prob;
    double listed = 0;
    for (const auto& [s, w] : en.coverings) {
        double p = to_double(w / Z);
        prob[chain_key(s)] += p;
        listed += p;
    }
    CoveringSampler sampler(model, TruncationPolicy::defaults(model));
    auto samples = sample_many(sampler, draws, seed, threads);
    std::map<std::string, long> count;
    for (const auto& s : samples) ++count[chain_key(s)];
    // bins: chains with expected count >= 5, everything else pooled
    ChiSquareResult r;
    r.unlisted_mass = std::max(0.0, 1.0 - listed);
    double pooled_p = r.unlisted_mass;
    long pooled_n = 0;
    int bins = 0;
    const double n = static_cast<double>(draws);
    for (const auto& [k, p] : prob) {
        long c = count.count(k) ? count[k] : 0;
        if (n * p >= 5) {
            r.statistic += (c - n * p) * (c - n * p) / (n * p);
            ++bins;
        } else {
            pooled_p += p;
            pooled_n += c;
        }
    }
    for (const auto& [k, c] : count)
        if (!prob.count(k)) pooled_n += c;
    if (n * pooled_p >= 5) {
        r.statistic += (pooled_n - n * pooled_p) * (pooled_n - n * pooled_p) / (n * pooled_p);
        ++bins;
    } else if (pooled_n > 0 && pooled_p == 0) {
        r.statistic = INFINITY;   // sampled a chain of probability zero
    }
    r.dof = std::max(bins - 1, 1);
    r.pvalue = chi_square_pvalue(r.statistic, r.dof);
    return r;
}

std::vector<std::string> suite_names() {
    return {"commutation", "coset-schur", "l212", "charge", "hciz", "bands", "sampler"};
}

std::vector<CheckResult> run_suite(const std::string& name, const SuiteOptions& opt) {
    if (name == "commutation") return suite_commutation(opt);
    if (name == "coset-schur") return suite_coset_schur(opt);
    if (name == "l212") return suite_l212(opt);
    if (name == "charge") return suite_charge(opt);
    if (name == "hciz") return suite_hciz(opt);
    if (name == "bands") return suite_bands(opt);
    if (name == "sampler") return suite_sampler(opt);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace rys
