// rys: batch runner for the rail-yard / Schur-process toolkit.
//
//   rys pf      --model M [--mode exact|float]
//   rys sample  --model M --n 1000 --seed 7 [--threads 4] [--out chains.csv]
//   rys verify  [--suite NAME ...] [--model M ...] [--cases C] [--n N] [--seed S]
//   rys moments --model M --t T [--terms h:k:l,...] [--mode exact|float]
//   rys gue     [--config C] [--seed S] [--threads T] [--out ladder.csv]
//
// Exit codes: 0 pass, 1 verification failure, 2 configuration error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rys/fock.hpp"
#include "rys/gue.hpp"
#include "rys/railyard.hpp"
#include "rys/sgf.hpp"
#include "rys/suites.hpp"

#ifndef RYS_VERSION
#define RYS_VERSION "0.1.0"
#endif

using namespace rys;
using json = nlohmann::json;

namespace {

constexpr int kPass = 0, kFail = 1, kConfig = 2;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string config_hash(const std::string& canonical) {
    std::uint64_t h = 1469598103934665603ull;   // FNV-1a
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void header(std::ostream& os, const std::string& command, const std::string& canonical, std::uint64_t seed,
            double wall, const std::string& prefix = "# ") {
    os << prefix << "rys " << RYS_VERSION << " " << command << "\n";
    os << prefix << "config_hash " << config_hash(canonical) << "\n";
    os << prefix << "seed " << seed << "\n";
    os << prefix << "wall_time_s " << std::fixed << std::setprecision(3) << wall << std::defaultfloat << "\n";
}

RailYardModel load_model(const std::string& path) {
    if (path.empty()) throw ConfigError("--model is required");
    try {
        auto m = RailYardModel::load(path);
        m.validate();
        return m;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("model ") + path + ": " + e.what());
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- pf

int cmd_pf(const std::string& model_path, const std::string& mode) {
    auto t0 = std::chrono::steady_clock::now();
    auto model = load_model(model_path);
    if (model.divergent())
        throw ConfigError("divergent weights: x_i x_j >= 1 for a same-letter (+,-) pair; the partition function is infinite");
    std::ostringstream body;
    int rc = kPass;
    std::string why;
    const bool pf_ok = product_formula_applicable(model, &why);
    if (mode == "exact") {
        Rational z = partition_function(model);
        body << "partition_function " << to_string(z) << " (" << to_double(z) << ")\n";
        if (pf_ok) {
            Rational p = product_formula(model);
            body << "product_formula " << to_string(p) << " (" << to_double(p) << ")\n";
            body << "match " << (p == z ? "yes" : "NO") << "\n";
            if (p != z) rc = kFail;
        } else {
            body << "product_formula skipped: " << why << "\n";
        }
    } else {
        double z = partition_function_d(model);
        body << "partition_function " << std::setprecision(17) << z << "\n";
        if (pf_ok) {
            double p = to_double(product_formula(model));
            double rel = std::fabs(p - z) / std::max(std::fabs(z), 1e-300);
            body << "product_formula " << p << "\nrelative_error " << rel << "\n";
            if (rel > 1e-9) rc = kFail;
        } else {
            body << "product_formula skipped: " << why << "\n";
        }
    }
    header(std::cout, "pf", "pf|" + mode + "|" + model.to_json(), 0, seconds_since(t0));
    std::cout << body.str();
    return rc;
}

// ---------------------------------------------------------------- sample

int cmd_sample(const std::string& model_path, long n, std::uint64_t seed, int threads, const std::string& out) {
    if (n < 0) throw ConfigError("--n must be nonnegative");
    auto model = load_model(model_path);
    if (model.divergent()) throw ConfigError("divergent weights: sampling undefined");
    auto t0 = std::chrono::steady_clock::now();
    CoveringSampler sampler(model, TruncationPolicy::defaults(model));
    auto samples = sample_many(sampler, n, seed, threads);
    const double wall = seconds_since(t0);
    std::ostringstream body;
    write_csv_header(body, model);
    for (long i = 0; i < n; ++i) write_csv_row(body, i, samples[i]);
    std::ofstream file;
    if (!out.empty()) {
        file.open(out);
        if (!file) throw ConfigError("cannot write " + out);
    }
    std::ostream& os = out.empty() ? std::cout : file;
    header(os, "sample", "sample|" + std::to_string(n) + "|" + model.to_json(), seed, wall);
    os << body.str();
    std::cerr << "sampled " << n << " chains in " << wall << " s (" << (wall > 0 ? n / wall : 0.0) << " /s, "
              << (sampler.structured() ? "structured" : "transfer") << " sampler, "
              << "truncation loss " << sampler.truncation_loss() << ")\n";
    return kPass;
}

// ---------------------------------------------------------------- verify

int cmd_verify(std::vector<std::string> suites, const SuiteOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    const auto known = suite_names();
    if (suites.empty()) suites = known;
    for (const auto& s : suites)
        if (std::find(known.begin(), known.end(), s) == known.end()) throw ConfigError("unknown suite '" + s + "'");
    std::vector<CheckResult> results;
    for (const auto& s : suites) {
        try {
            auto r = run_suite(s, opt);
            results.insert(results.end(), r.begin(), r.end());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(s + ": " + e.what());
        }
    }
    std::string canonical = "verify";
    for (const auto& s : suites) canonical += "|" + s;
    for (const auto& m : opt.model_paths) canonical += "|" + m;
    canonical += "|" + opt.cases_path + "|" + std::to_string(opt.samples) + "|" + std::to_string(opt.hciz_samples);
    header(std::cout, "verify", canonical, opt.seed, seconds_since(t0));
    int failed = 0;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << std::left << std::setw(12) << r.suite << " " << r.name << " -- "
                  << r.detail << "\n";
        failed += !r.pass;
    }
    std::cout << results.size() - failed << "/" << results.size() << " checks passed\n";
    return failed ? kFail : kPass;
}

// ---------------------------------------------------------------- moments

std::vector<MomentTerm> parse_terms(const std::string& text) {
    std::vector<MomentTerm> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        MomentTerm m;
        if (std::sscanf(item.c_str(), "%d:%d:%d", &m.h, &m.k, &m.l) != 3 || m.h < 0 || m.k < 1 || m.l < 1)
            throw ConfigError("bad moment term '" + item + "' (expected h:k:l)");
        out.push_back(m);
    }
    if (out.empty()) throw ConfigError("--terms is empty");
    return out;
}

int cmd_moments(const std::string& model_path, int t, const std::string& terms_text, const std::string& mode) {
    auto t0 = std::chrono::steady_clock::now();
    auto model = load_model(model_path);
    if (t < model.l || t > model.r) throw ConfigError("--t must lie in [l..r]");
    auto terms = parse_terms(terms_text);
    auto classes = WeightClasses::from_model(model);
    for (const auto& m : terms)
        if (m.h > classes.n()) throw ConfigError("moment term refers to a missing weight class");
    MomentResult fd;
    try {
        fd = difference_operator_moment(model, t, terms);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    std::ostringstream body;
    body << std::setprecision(12);
    body << "difference_operator_moment " << fd.value << "\n";
    body << "extrapolation_disagreement " << fd.disagreement << (fd.unstable ? " (unstable)" : "") << "\n";
    int rc = kPass;
    if (mode == "exact") {
        auto ex = exact_boundary_moment(model, t, terms);
        const double exact = ex.value;
        const bool all_rows = ex.comparable;
        const double dropped = ex.dropped;
        double rel = std::fabs(fd.value - exact) / std::max(std::fabs(exact), 1e-300);
        body << (all_rows ? "exact_measure_moment " : "class_rows_moment (informational) ") << exact << "\n";
        body << "truncated_mass " << dropped << "\n";
        body << "relative_error " << rel << "\n";
        if (all_rows && rel > 1e-5) rc = kFail;
    }
    header(std::cout, "moments", "moments|" + std::to_string(t) + "|" + terms_text + "|" + mode + "|" + model.to_json(),
           0, seconds_since(t0));
    std::cout << body.str();
    return rc;
}

// ---------------------------------------------------------------- gue

LadderConfig ladder_config(const std::string& path, std::uint64_t seed, int threads) {
    LadderConfig cfg;
    cfg.seed = seed;
    cfg.threads = threads;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    json j;
    try {
        j = json::parse(in);
        if (j.contains("sizes")) cfg.sizes = j.at("sizes").get<std::vector<int>>();
        if (j.contains("samples")) cfg.samples = j.at("samples").get<long>();
        if (j.contains("k")) cfg.k = j.at("k").get<int>();
        if (j.contains("h")) cfg.h = j.at("h").get<int>();
        if (j.contains("reference_draws")) cfg.reference_draws = j.at("reference_draws").get<long>();
        if (j.contains("a")) cfg.base.a = parse_rational(j.at("a").get<std::string>());
        if (j.contains("ratio")) cfg.base.ratio = parse_rational(j.at("ratio").get<std::string>());
        if (j.contains("y")) cfg.base.y = parse_rational(j.at("y").get<std::string>());
        if (j.contains("tail")) cfg.base.tail = j.at("tail").get<int>();
        if (j.contains("plus_factor")) cfg.base.plus_factor = j.at("plus_factor").get<int>();
        if (j.contains("moments")) {
            auto m = j.at("moments").get<std::string>();
            if (m != "finite" && m != "limit") throw ConfigError("moments must be finite or limit");
            cfg.moments = m == "finite" ? MomentMode::Finite : MomentMode::Limit;
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config ") + path + ": " + e.what());
    }
    if (cfg.samples < 2 || cfg.sizes.empty()) throw ConfigError("config needs samples >= 2 and a nonempty size list");
    return cfg;
}

int cmd_gue(const std::string& config_path, std::uint64_t seed, int threads, const std::string& out) {
    auto t0 = std::chrono::steady_clock::now();
    auto cfg = ladder_config(config_path, seed, threads);
    std::vector<LadderStep> steps;
    try {
        steps = run_ladder(cfg);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    std::ostringstream csv;
    csv << std::setprecision(6);
    csv << "N,h,constants,normalization,samples,A,B";
    for (int i = 1; i <= cfg.k; ++i) csv << ",ks_" << i;
    csv << ",max_ks";
    for (int i = 1; i <= cfg.k; ++i) csv << ",mean_err_" << i;
    csv << ",second_moment_err,class_correlation\n";
    for (const auto& st : steps)
        for (const auto& r : st.rows) {
            csv << st.N << "," << cfg.h << "," << variant_name(r.variant) << "," << norm_name(r.norm) << ",";
            if (!r.error.empty()) {
                csv << cfg.samples << ",,";
                for (int i = 0; i < 2 * cfg.k + 2; ++i) csv << ",";
                csv << st.class_correlation << "\n";
                continue;
            }
            csv << r.report.samples << "," << r.A << "," << r.B;
            for (double v : r.report.ks) csv << "," << v;
            csv << "," << r.report.max_ks();
            for (double v : r.report.mean_error) csv << "," << v;
            csv << "," << r.report.second_moment_error << "," << st.class_correlation << "\n";
        }
    std::ostringstream canon;
    canon << "gue|" << cfg.samples << "|" << cfg.k << "|" << cfg.h << "|" << cfg.reference_draws << "|"
          << to_string(cfg.base.a) << "|" << to_string(cfg.base.ratio) << "|" << to_string(cfg.base.y) << "|"
          << cfg.base.tail << "|" << cfg.base.plus_factor << "|" << (cfg.moments == MomentMode::Finite);
    for (int N : cfg.sizes) canon << "|" << N;
    const double wall = seconds_since(t0);
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) throw ConfigError("cannot write " + out);
        header(f, "gue", canon.str(), seed, wall);
        f << csv.str();
    }
    header(std::cout, "gue", canon.str(), seed, wall);
    std::cout << std::setprecision(4);
    for (const auto& st : steps) {
        std::cout << "N=" << st.N << "  sampling " << st.seconds << " s  corr(class1 top, class2 top) "
                  << st.class_correlation << "\n";
        for (const auto& r : st.rows) {
            std::cout << "  " << std::left << std::setw(11) << variant_name(r.variant) << std::setw(6)
                      << norm_name(r.norm);
            if (!r.error.empty()) {
                std::cout << r.error << "\n";
                continue;
            }
            std::cout << "KS";
            for (double v : r.report.ks) std::cout << " " << v;
            std::cout << "  mean err";
            for (double v : r.report.mean_error) std::cout << " " << v;
            std::cout << "\n";
        }
    }
    if (out.empty()) std::cout << csv.str();
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rail-yard dimer / Schur process toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("rys ") + RYS_VERSION);

    std::string model, out, mode = "exact", cases, config, terms = "0:1:1";
    std::vector<std::string> suites, models;
    long n = 1000, hciz_samples = 1000000;
    int t = 1, threads = 1, max_size = 8;
    std::uint64_t seed = 1;

    auto* pf = app.add_subcommand("pf", "exact partition function and product-formula cross-check");
    pf->add_option("--model", model, "model file")->required();
    pf->add_option("--mode", mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));

    auto* sample = app.add_subcommand("sample", "sample coverings, CSV of partition chains");
    sample->add_option("--model", model, "model file")->required();
    sample->add_option("--n", n, "number of samples");
    sample->add_option("--seed", seed, "seed");
    sample->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sample->add_option("--out", out, "CSV path (default stdout)");

    auto* verify = app.add_subcommand("verify", "run invariant suites");
    verify->add_option("--suite", suites, "suite name (repeatable): commutation coset-schur l212 charge hciz bands sampler");
    verify->add_option("--model", models, "model file for charge/sampler suites (repeatable)");
    verify->add_option("--cases", cases, "case file for coset-schur or hciz");
    verify->add_option("--n", n, "samples for charge/sampler suites");
    verify->add_option("--hciz-samples", hciz_samples, "Monte Carlo samples per HCIZ case");
    verify->add_option("--max-size", max_size, "|lambda| bound for exhaustive suites");
    verify->add_option("--seed", seed, "seed");
    verify->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

    auto* moments = app.add_subcommand("moments", "difference-operator moments of the law after column t");
    moments->add_option("--model", model, "model file")->required();
    moments->add_option("--t", t, "split column")->required();
    moments->add_option("--terms", terms, "comma-separated h:k:l factors (h = 0: all rows)");
    moments->add_option("--mode", mode, "exact (also compare with the exact law) or float")
        ->check(CLI::IsMember({"exact", "float"}));

    auto* gue = app.add_subcommand("gue", "size-ladder GUE comparison");
    gue->add_option("--config", config, "ladder config (JSON)");
    gue->add_option("--seed", seed, "seed");
    gue->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    gue->add_option("--out", out, "CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kConfig;
    }

    try {
        if (*pf) return cmd_pf(model, mode);
        if (*sample) return cmd_sample(model, n, seed, threads, out);
        if (*verify) {
            SuiteOptions opt;
            opt.seed = seed;
            opt.threads = threads;
            if (verify->count("--n")) opt.samples = n;
            opt.hciz_samples = hciz_samples;
            opt.max_size = max_size;
            opt.model_paths = models;
            opt.cases_path = cases;
            return cmd_verify(suites, opt);
        }
        if (*moments) return cmd_moments(model, t, terms, mode);
        if (*gue) return cmd_gue(config, seed, threads, out);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    }
    return kConfig;
}
