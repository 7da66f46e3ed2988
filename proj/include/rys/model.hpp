#pragma once

#include <string>
#include <vector>

#include "rys/partition.hpp"
#include "rys/rational.hpp"

namespace rys {

enum class Letter { L, R };
enum class Sign { Plus, Minus };

struct StepKind {
    Letter letter = Letter::L;
    Sign sign = Sign::Plus;
    bool plus() const { return sign == Sign::Plus; }
    bool minus() const { return sign == Sign::Minus; }
    bool is_L() const { return letter == Letter::L; }
    friend bool operator==(StepKind a, StepKind b) { return a.letter == b.letter && a.sign == b.sign; }
};

inline constexpr StepKind kLPlus{Letter::L, Sign::Plus};
inline constexpr StepKind kLMinus{Letter::L, Sign::Minus};
inline constexpr StepKind kRPlus{Letter::R, Sign::Plus};
inline constexpr StepKind kRMinus{Letter::R, Sign::Minus};

std::string kind_name(StepKind k);   // "L+", "R-", ...

// Relation between the state on the left of a column (lambda^(i)) and the one on its
// right (lambda^(i+1)):  (L,+): left ≺ right,  (L,-): left ≻ right,
//                        (R,+): left ≺' right, (R,-): left ≻' right.
bool step_allowed(StepKind k, const Partition& left, const Partition& right);

// z_ij factor produced by moving a + column past a later - column.
Rational pair_factor(Letter a, Letter b, const Rational& xi, const Rational& xj);
double pair_factor(Letter a, Letter b, double xi, double xj);

struct RailYardModel {
    int l = 1;
    int r = 0;
    std::vector<StepKind> kinds;      // index i - l
    std::vector<Rational> weights;    // index i - l
    Partition left_boundary;
    Partition right_boundary;

    int columns() const { return r - l + 1; }
    StepKind kind(int i) const { return kinds.at(i - l); }
    const Rational& weight(int i) const { return weights.at(i - l); }
    double weight_d(int i) const { return weights.at(i - l).get_d(); }

    void validate() const;   // throws std::invalid_argument
    int count(StepKind k) const;
    int count_sign(Sign s) const;
    bool has_RMinus() const { return count(kRMinus) > 0; }

    // Same-letter (+ before -) pairs with x_i x_j >= 1 make the partition function diverge.
    bool divergent() const;

    std::string lr_seq() const;
    std::string sign_seq() const;

    // JSON with keys l, r, lr_seq, sign_seq, weights ("p/q" strings), left_boundary, right_boundary.
    std::string to_json() const;
    static RailYardModel from_json(const std::string& text);
    static RailYardModel load(const std::string& path);

    // Build from string descriptions, e.g. ("LRRL", "++--", {...}).
    static RailYardModel make(const std::string& lr, const std::string& signs, std::vector<Rational> w,
                              Partition left = {}, Partition right = {}, int l = 1);
};

}  // namespace rys
