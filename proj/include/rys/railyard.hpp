#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rys/model.hpp"

namespace rys {

// One dimer covering, represented through its partition chain
// lambda^(l), ..., lambda^(r+1).  partitions[i - l] is lambda^(i).
struct DimerSample {
    int l = 1;
    std::vector<Partition> partitions;
    std::vector<StepKind> step_kinds;
    std::vector<long> diag_counts;   // d_i = | |lambda^(i)| - |lambda^(i+1)| |
    int charge_offset = 0;           // filling offset of the particle-hole columns (0 for pure coverings)

    const Partition& at(int i) const { return partitions.at(i - l); }
    int r() const { return l + static_cast<int>(step_kinds.size()) - 1; }
};

DimerSample make_sample(const RailYardModel& model, std::vector<Partition> chain, int charge_offset = 0);
bool consistent(const DimerSample& s, const RailYardModel& model);

// Particle-hole configuration of one odd column, stored on a finite window
// [lo, hi) of half-integer heights k + 1/2; below the window only particles,
// above it only holes.
struct ParticleHoleColumn {
    int column = 0;
    int lo = 0;                  // window covers heights lo+1/2 .. hi-1/2
    int hi = 0;
    std::vector<char> particle;  // particle[k - lo] for height k + 1/2
    bool is_particle(int k) const {
        if (k < lo) return true;
        if (k >= hi) return false;
        return particle[k - lo] != 0;
    }
};

ParticleHoleColumn particle_hole_column(const Partition& lambda, int charge_offset, int column);
// Partition read off a column: lambda_i = number of holes below the i-th highest particle.
Partition decode_column(const ParticleHoleColumn& col);
int column_charge(const ParticleHoleColumn& col);

Rational partition_function(const RailYardModel& model);
double partition_function_d(const RailYardModel& model);
// s_{lambda^(l)}(x^{(L,-)}) * prod z_ij ; throws if the model has an (R,-) column or a nonempty right boundary.
Rational product_formula(const RailYardModel& model);
bool product_formula_applicable(const RailYardModel& model, std::string* why = nullptr);

int charge(const DimerSample& sample, int m);
Rational sample_weight(const DimerSample& sample, const RailYardModel& model);

struct Enumeration {
    std::vector<std::pair<DimerSample, Rational>> coverings;
    bool capped = false;   // some chain was cut by the cap
};
Enumeration enumerate_coverings(const RailYardModel& model, int cap);

// CSV: one row per sample; header "sample,lambda_l,...,lambda_{r+1}".
void write_csv_header(std::ostream& os, const RailYardModel& model);
void write_csv_row(std::ostream& os, long index, const DimerSample& s);

}  // namespace rys
