#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rys/model.hpp"
#include "rys/railyard.hpp"
#include "rys/sgf.hpp"

namespace rys {

// Eigenvalues of a k x k GUE matrix: H_ii ~ N(0,1), Re/Im of H_ij ~ N(0,1/2) (i < j).
// The eigenvalue density is then proportional to prod (e_i - e_j)^2 exp(-sum e_i^2 / 2).
struct GueSpectrum {
    int k = 0;
    std::vector<double> eigenvalues;   // descending
};

GueSpectrum sample_gue_spectrum(int k, std::mt19937_64& rng);
GueSpectrum sample_gue_spectrum(int k, std::uint64_t seed);

// Monte Carlo marginals of GUE_k, sorted per coordinate, plus first/second moments.
struct GueReference {
    int k = 0;
    std::vector<std::vector<double>> marginals;   // marginals[i] sorted ascending, coordinate i+1
    std::vector<double> mean;
    std::vector<std::vector<double>> second;      // E[e_i e_j]
    // cached per (k, draws, seed)
    static const GueReference& get(int k, long draws = 1000000, std::uint64_t seed = 20240601);
};

// sup |F_a - F_b| for two sorted samples
double ks_distance(const std::vector<double>& a_sorted, const std::vector<double>& b_sorted);
double chi_square_pvalue(double statistic, double dof);

// 2-D histogram test of the k = 2 eigenvalue density prod (e_i - e_j)^2 exp(-sum e_i^2 / 2):
// in s = (e1 + e2)/sqrt2, d = (e1 - e2)/sqrt2 it factorises into N(0,1) times a chi(3) law, so
// each of the bins x bins equal-probability cells has mass 1/bins^2 exactly.
struct DensityCheck {
    long draws = 0;
    int cells = 0;
    double statistic = 0;
    double pvalue = 0;
};
DensityCheck gue_pair_density_check(long draws, std::uint64_t seed, int bins = 8);

// Haar unitary: QR of a complex Ginibre matrix with the phases of diag(R) removed.
Eigen::MatrixXcd haar_unitary(int n, std::mt19937_64& rng);

struct HcizReport {
    double exact = 0;        // s_lambda(e^a) / s_lambda(1^N)
    double mc_mean = 0;      // prefactor * mean of exp(Tr(U* A U B))
    double mc_stderr = 0;
    double z = 0;
    long samples = 0;
    bool perturbed = false;  // a had ties and was split
};
HcizReport hciz_check(const Partition& lambda, int N, std::vector<double> a, long mc_samples, std::uint64_t seed);

// Density-one bands of the limit counting measure of class h (only defined when the classes
// own contiguous runs of boundary values).
struct Band {
    Rational beta, gamma;
    Rational gamma_closed_form;   // the alternative closed expression (b_{s-d_i-k+1} - a_1)/theta_i
};
std::vector<Band> limit_bands(const PiecewiseBoundary& boundary, const WeightClasses& classes, int h);

enum class MomentMode { Limit, Finite };
struct MeasureMoments {
    Rational psi1, psi2;
};
// Limit: integrate the bands.  Finite: counting measure of lambda^{(h,sigma0)} with N_h points.
MeasureMoments limit_measure_moments(const PiecewiseBoundary& boundary, const WeightClasses& classes, int h,
                                     MomentMode mode = MomentMode::Limit);

enum class ConstantsVariant {
    Displayed,    // correction sums exactly as printed
    Consistent    // sums divided by N_h, (R,+) columns with the 1+xx' forms, -1/12 for every class
};
struct RescalingConstants {
    int h = 1;
    double A = 0, B = 0;
    Rational psi1, psi2;
    ConstantsVariant variant = ConstantsVariant::Displayed;
    bool exact = false;          // no weight corrections: A, B are exact rationals of psi
    Rational A_exact, B_exact;
};
RescalingConstants rescaling_constants(const RailYardModel& model, int t, int h, const MeasureMoments& psi,
                                       ConstantsVariant variant = ConstantsVariant::Displayed);

enum class Normalization {
    Linear,   // divide by B
    Sqrt      // divide by sqrt(B)
};
struct CompareOptions {
    Normalization norm = Normalization::Sqrt;
    bool displayed_shift = false;   // lambda_i + N_h - i instead of lambda_i + k - i
    long reference_draws = 1000000;
};

struct GueComparisonReport {
    int h = 1, k = 1;
    long samples = 0;
    Normalization norm = Normalization::Sqrt;
    std::vector<double> ks;          // per coordinate
    std::vector<double> mean;        // empirical means of the rescaled coordinates
    std::vector<double> mean_error;  // vs GUE_k
    double second_moment_error = 0;  // max |E b_i b_j - E e_i e_j|
    double max_ks() const;
};

// Rescaled coordinates b_i, i = 1..k, of the class-h rows of each partition.
std::vector<std::vector<double>> rescaled_coordinates(const std::vector<Partition>& at_t, int offset, int Nh,
                                                      const RescalingConstants& c, int k, const CompareOptions& opt);
GueComparisonReport gue_compare(const std::vector<Partition>& at_t, int offset, int Nh, const RescalingConstants& c,
                                int k, const CompareOptions& opt);
// Split "after column t": the partitions are lambda^(t+1) of each sample.
GueComparisonReport gue_compare(const std::vector<DimerSample>& samples, const RailYardModel& model, int t, int h,
                                const RescalingConstants& c, int k, const CompareOptions& opt = {});

double correlation(const std::vector<double>& x, const std::vector<double>& y);

// Two weight classes a > b = a/ratio, left boundary (N^{N1}) with N1 = N2 = N/2:
//   [a^{N1-tail}] [b^{N2-tail}] [(L,+)^M weight y] [a^tail] [b^tail]
struct LadderParams {
    int N = 24;
    Rational a = Rational(4, 5);
    Rational ratio = 8;
    Rational y = Rational(4, 5);
    int tail = 3;
    int plus_factor = 2;   // M = plus_factor * N
};
RailYardModel ladder_model(const LadderParams& p);
int ladder_split(const LadderParams& p);   // t = the last (L,+) column

// Size-ladder GUE comparison: every (constants variant, normalization) pair per N.
struct LadderConfig {
    std::vector<int> sizes{24, 48, 96};
    long samples = 20000;
    int k = 3;
    int h = 1;
    LadderParams base;
    MomentMode moments = MomentMode::Finite;
    long reference_draws = 1000000;
    std::uint64_t seed = 1;
    int threads = 1;
};
struct LadderRow {
    int N = 0;
    ConstantsVariant variant = ConstantsVariant::Displayed;
    Normalization norm = Normalization::Sqrt;
    double A = 0, B = 0;
    GueComparisonReport report;
    std::string error;   // constants rejected (B <= 0)
};
struct LadderStep {
    int N = 0;
    double seconds = 0;            // sampling wall time
    double class_correlation = 0;  // class-1 top row vs class-2 top row after t
    std::vector<LadderRow> rows;
};
std::vector<LadderStep> run_ladder(const LadderConfig& cfg);
std::string variant_name(ConstantsVariant v);
std::string norm_name(Normalization n);

}  // namespace rys
