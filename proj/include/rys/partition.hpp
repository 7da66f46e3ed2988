#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace rys {

// A partition stored without trailing zeros.  The logical length is passed
// explicitly wherever it matters (shifted coordinates, counting measures).
class Partition {
public:
    Partition() = default;
    Partition(std::initializer_list<int> parts);
    explicit Partition(std::vector<int> parts);

    // Like the constructor but skips validation; caller promises a
    // non-increasing, non-negative sequence (trailing zeros are still trimmed).
    static Partition from_sorted(std::vector<int> parts);

    const std::vector<int>& parts() const { return parts_; }
    // i-th part, 1-based, with implicit zero padding.
    int operator[](std::size_t i) const { return (i >= 1 && i <= parts_.size()) ? parts_[i - 1] : 0; }
    std::size_t length() const { return parts_.size(); }
    bool empty() const { return parts_.empty(); }
    long size() const;   // |lambda|
    int first() const { return parts_.empty() ? 0 : parts_[0]; }

    bool contains(const Partition& mu) const;   // mu ⊂ lambda as diagrams

    std::string str() const;
    static Partition parse(std::string_view text);

    friend bool operator==(const Partition& a, const Partition& b) { return a.parts_ == b.parts_; }
    friend bool operator!=(const Partition& a, const Partition& b) { return !(a == b); }
    friend bool operator<(const Partition& a, const Partition& b) { return a.parts_ < b.parts_; }

private:
    void trim();
    std::vector<int> parts_;
};

struct PartitionHash {
    std::size_t operator()(const Partition& p) const noexcept;
};

// mu ≺ lambda : lambda_1 >= mu_1 >= lambda_2 >= mu_2 >= ...
bool interlaces(const Partition& mu, const Partition& lambda);
// mu ≺' lambda : conjugates interlace, i.e. 0 <= lambda_i - mu_i <= 1 for all i
bool interlaces_conjugate(const Partition& mu, const Partition& lambda);

Partition conjugate(const Partition& lambda);

// (lambda_i + N - i), i = 1..N.  Throws std::invalid_argument if l(lambda) > N.
std::vector<long> shifted_coordinates(const Partition& lambda, int N);

struct CountingMeasure {
    std::vector<double> atoms;   // descending, each of mass 1/N
    double mass() const { return atoms.empty() ? 0.0 : 1.0; }
    double moment(int k) const;
};

CountingMeasure counting_measure(const Partition& lambda, int N);

// Enumeration helpers used by the brute-force oracles.
std::vector<Partition> partitions_of(int n);
std::vector<Partition> partitions_up_to(int max_size);
// All partitions fitting in a box: at most max_len rows, parts at most max_part.
std::vector<Partition> partitions_in_box(int max_len, int max_part);

// All mu with mu ≺ lambda (horizontal strips removed), optionally bounded in size.
std::vector<Partition> strips_below(const Partition& lambda);
// All mu with lambda ≺ mu, first part at most max_first, length at most max_len.
std::vector<Partition> strips_above(const Partition& lambda, int max_first, int max_len);
// All mu with mu ≺' lambda.
std::vector<Partition> vstrips_below(const Partition& lambda);
// All mu with lambda ≺' mu, first part at most max_first, length at most max_len.
std::vector<Partition> vstrips_above(const Partition& lambda, int max_first, int max_len);

}  // namespace rys
