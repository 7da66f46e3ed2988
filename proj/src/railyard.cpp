#include "rys/railyard.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "rys/fock.hpp"
#include "rys/symfunc.hpp"

namespace rys {

DimerSample make_sample(const RailYardModel& model, std::vector<Partition> chain, int charge_offset) {
    if (static_cast<int>(chain.size()) != model.columns() + 1) throw std::invalid_argument("sample: chain length mismatch");
    DimerSample s;
    s.l = model.l;
    s.partitions = std::move(chain);
    s.step_kinds = model.kinds;
    s.diag_counts.resize(model.columns());
    for (int k = 0; k < model.columns(); ++k) {
        long d = s.partitions[k].size() - s.partitions[k + 1].size();
        s.diag_counts[k] = d < 0 ? -d : d;
    }
    s.charge_offset = charge_offset;
    return s;
}

bool consistent(const DimerSample& s, const RailYardModel& model) {
    if (s.l != model.l || static_cast<int>(s.partitions.size()) != model.columns() + 1) return false;
    if (s.partitions.front() != model.left_boundary || s.partitions.back() != model.right_boundary) return false;
    for (int k = 0; k < model.columns(); ++k) {
        if (!(s.step_kinds[k] == model.kinds[k])) return false;
        if (!step_allowed(model.kinds[k], s.partitions[k], s.partitions[k + 1])) return false;
        if (model.weights[k] == 0 && s.diag_counts[k] != 0) return false;
    }
    return true;
}

ParticleHoleColumn particle_hole_column(const Partition& lambda, int charge_offset, int column) {
    ParticleHoleColumn col;
    col.column = column;
    const int len = static_cast<int>(lambda.length());
    col.lo = std::min(charge_offset - len - 2, -1);
    col.hi = std::max(lambda.first() + charge_offset + 2, 1);
    col.particle.assign(col.hi - col.lo, 0);
    // particle i sits at height (lambda_i - i + c) + 1/2; for i > l(lambda) these fill everything below
    for (int i = 1;; ++i) {
        int k = lambda[i] - i + charge_offset;
        if (k < col.lo) break;
        col.particle[k - col.lo] = 1;
    }
    return col;
}

Partition decode_column(const ParticleHoleColumn& col) {
    std::vector<int> parts;
    int holes_below = 0;
    // walk upwards counting holes; record holes-below for each particle, then reverse
    std::vector<int> at_particles;
    for (int k = col.lo; k < col.hi; ++k) {
        if (col.is_particle(k)) at_particles.push_back(holes_below);
        else ++holes_below;
    }
    std::reverse(at_particles.begin(), at_particles.end());
    return Partition::from_sorted(at_particles);
}

int column_charge(const ParticleHoleColumn& col) {
    int particles_above = 0, holes_below = 0;
    for (int k = 0; k < std::max(col.hi, 0); ++k)
        if (col.is_particle(k)) ++particles_above;
    for (int k = std::min(col.lo, 0); k < 0; ++k)
        if (!col.is_particle(k)) ++holes_below;
    return particles_above - holes_below;
}

Rational partition_function(const RailYardModel& model) {
    model.validate();
    if (model.divergent()) throw std::domain_error("partition function diverges: x_i x_j >= 1 for a same-letter (+,-) pair");
    return segment_amplitude(model, model.l, model.r, model.left_boundary, model.right_boundary);
}

double partition_function_d(const RailYardModel& model) { return to_double(partition_function(model)); }

bool product_formula_applicable(const RailYardModel& model, std::string* why) {
    // with an empty left boundary the Schur factor is 1 and (R,-) columns only enter through z_ij
    if (model.has_RMinus() && !model.left_boundary.empty()) {
        if (why) *why = "model has an (R,-) column and a nonempty left boundary";
        return false;
    }
    if (!model.right_boundary.empty()) {
        if (why) *why = "right boundary is not empty";
        return false;
    }
    return true;
}

Rational product_formula(const RailYardModel& model) {
    std::string why;
    if (!product_formula_applicable(model, &why)) throw std::invalid_argument("product formula hypothesis violated: " + why);
    if (model.divergent()) throw std::domain_error("product formula diverges: x_i x_j >= 1 for a same-letter (+,-) pair");
    std::vector<Rational> xs;
    for (int i = model.l; i <= model.r; ++i)
        if (model.kind(i) == kLMinus) xs.push_back(model.weight(i));
    Rational s = schur(model.left_boundary, xs);
    Rational z = 1;
    for (int i = model.l; i <= model.r; ++i) {
        if (!model.kind(i).plus()) continue;
        for (int j = i + 1; j <= model.r; ++j)
            if (model.kind(j).minus()) z *= pair_factor(model.kind(i).letter, model.kind(j).letter, model.weight(i), model.weight(j));
    }
    return s * z;
}

int charge(const DimerSample& sample, int m) {
    if (m < sample.l || m > sample.r() + 1) throw std::out_of_range("charge: column outside [l..r+1]");
    auto col = particle_hole_column(sample.at(m), sample.charge_offset, 2 * m - 1);
    if (decode_column(col) != sample.at(m)) throw std::logic_error("charge: particle-hole round trip failed");
    return column_charge(col);
}

Rational sample_weight(const DimerSample& sample, const RailYardModel& model) {
    if (!consistent(sample, model)) throw std::invalid_argument("sample_weight: sample inconsistent with model");
    Rational w = 1;
    for (int k = 0; k < model.columns(); ++k) w *= rpow(model.weights[k], sample.diag_counts[k]);
    return w;
}

Enumeration enumerate_coverings(const RailYardModel& model, int cap) {
    model.validate();
    Enumeration out;
    TruncationPolicy trunc;
    trunc.max_first_part = cap;
    trunc.max_length = cap;
    const int n = model.columns();
    // states that can still reach the right boundary under the cap, level by level
    std::vector<std::unordered_map<Partition, char, PartitionHash>> ok(n + 1);
    ok[n].emplace(model.right_boundary, 1);
    for (int k = n - 1; k >= 0; --k)
        for (const auto& [s, _] : ok[k + 1])
            for (auto& [p, e] : ket_neighbours(model.kinds[k], s, cap, cap))
                if (trunc.admits(p) && !(model.weights[k] == 0 && e > 0)) ok[k].emplace(p, 1);
    if (!ok[0].count(model.left_boundary)) return out;
    std::vector<Partition> chain{model.left_boundary};
    std::function<void(int, Rational)> rec = [&](int k, Rational w) {
        if (k == n) {
            out.coverings.emplace_back(make_sample(model, chain), w);
            return;
        }
        const auto& s = chain.back();
        for (auto& [p, e] : bra_neighbours(model.kinds[k], s, cap + 1, cap + 1)) {
            if (model.weights[k] == 0 && e > 0) continue;
            if (!trunc.admits(p)) {
                out.capped = true;
                continue;
            }
            if (!ok[k + 1].count(p)) continue;
            chain.push_back(p);
            rec(k + 1, w * rpow(model.weights[k], e));
            chain.pop_back();
        }
    };
    rec(0, Rational(1));
    return out;
}

void write_csv_header(std::ostream& os, const RailYardModel& model) {
    os << "sample";
    for (int i = model.l; i <= model.r + 1; ++i) os << ",lambda_" << i;
    os << '\n';
}

void write_csv_row(std::ostream& os, long index, const DimerSample& s) {
    os << index;
    for (const auto& p : s.partitions) os << ",\"" << p.str() << '"';
    os << '\n';
}

}  // namespace rys
