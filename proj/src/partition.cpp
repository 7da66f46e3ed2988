#include "rys/partition.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace rys {

Partition::Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] < 0) throw std::invalid_argument("partition: negative part");
        if (i > 0 && parts_[i] > parts_[i - 1]) throw std::invalid_argument("partition: parts must be non-increasing");
    }
    trim();
}

Partition Partition::from_sorted(std::vector<int> parts) {
    Partition p;
    p.parts_ = std::move(parts);
    p.trim();
    return p;
}

void Partition::trim() {
    while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
}

long Partition::size() const {
    long s = 0;
    for (int v : parts_) s += v;
    return s;
}

bool Partition::contains(const Partition& mu) const {
    if (mu.length() > length()) return false;
    for (std::size_t i = 0; i < mu.length(); ++i)
        if (mu.parts_[i] > parts_[i]) return false;
    return true;
}

std::string Partition::str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(parts_[i]);
    }
    s += ')';
    return s;
}

Partition Partition::parse(std::string_view text) {
    auto strip = [](std::string_view v) {
        while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
        while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
        return v;
    };
    text = strip(text);
    if (text.size() < 2 || text.front() != '(' || text.back() != ')')
        throw std::invalid_argument("partition text must look like (3,1,1): " + std::string(text));
    text = strip(text.substr(1, text.size() - 2));
    std::vector<int> parts;
    while (!text.empty()) {
        auto comma = text.find(',');
        auto tok = strip(text.substr(0, comma));
        int v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size())
            throw std::invalid_argument("bad partition part: " + std::string(tok));
        parts.push_back(v);
        if (comma == std::string_view::npos) break;
        text = text.substr(comma + 1);
    }
    return Partition(std::move(parts));
}

std::size_t PartitionHash::operator()(const Partition& p) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (int v : p.parts()) {
        h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

bool interlaces(const Partition& mu, const Partition& lambda) {
    // lambda_i >= mu_i >= lambda_{i+1}
    std::size_t n = std::max(mu.length(), lambda.length());
    for (std::size_t i = 1; i <= n; ++i) {
        if (mu[i] > lambda[i] || mu[i] < lambda[i + 1]) return false;
    }
    return true;
}

bool interlaces_conjugate(const Partition& mu, const Partition& lambda) {
    std::size_t n = std::max(mu.length(), lambda.length());
    for (std::size_t i = 1; i <= n; ++i) {
        int d = lambda[i] - mu[i];
        if (d < 0 || d > 1) return false;
    }
    return true;
}

Partition conjugate(const Partition& lambda) {
    std::vector<int> c(lambda.first(), 0);
    for (int v : lambda.parts())
        for (int j = 0; j < v; ++j) ++c[j];
    return Partition::from_sorted(std::move(c));
}

std::vector<long> shifted_coordinates(const Partition& lambda, int N) {
    if (N < 0 || lambda.length() > static_cast<std::size_t>(N))
        throw std::invalid_argument("shifted_coordinates: partition longer than N");
    std::vector<long> out(N);
    for (int i = 1; i <= N; ++i) out[i - 1] = lambda[i] + N - i;
    return out;
}

double CountingMeasure::moment(int k) const {
    if (atoms.empty()) return 0.0;
    double s = 0;
    for (double a : atoms) s += std::pow(a, k);
    return s / static_cast<double>(atoms.size());
}

CountingMeasure counting_measure(const Partition& lambda, int N) {
    CountingMeasure m;
    auto sc = shifted_coordinates(lambda, N);
    m.atoms.reserve(N);
    for (long v : sc) m.atoms.push_back(static_cast<double>(v) / N);
    return m;
}

namespace {

void gen_parts(int remaining, int max_part, std::vector<int>& cur, std::vector<Partition>& out) {
    if (remaining == 0) {
        out.push_back(Partition::from_sorted(cur));
        return;
    }
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
        cur.push_back(p);
        gen_parts(remaining - p, p, cur, out);
        cur.pop_back();
    }
}

void gen_box(int rows_left, int max_part, std::vector<int>& cur, std::vector<Partition>& out) {
    out.push_back(Partition::from_sorted(cur));
    if (rows_left == 0) return;
    for (int p = 1; p <= max_part; ++p) {
        cur.push_back(p);
        gen_box(rows_left - 1, p, cur, out);
        cur.pop_back();
    }
}

// Enumerate mu with lo_i <= mu_i <= hi_i for i = 1..n (rows beyond n are zero).
// The bounds used by callers always imply mu is a partition.
void gen_intervals(const std::vector<int>& lo, const std::vector<int>& hi, std::size_t i, std::vector<int>& cur,
                   std::vector<Partition>& out) {
    if (i == lo.size()) {
        out.push_back(Partition::from_sorted(cur));
        return;
    }
    for (int v = lo[i]; v <= hi[i]; ++v) {
        cur[i] = v;
        gen_intervals(lo, hi, i + 1, cur, out);
    }
}

std::vector<Partition> run_intervals(const std::vector<int>& lo, const std::vector<int>& hi) {
    std::vector<Partition> out;
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (lo[i] > hi[i]) return out;
    std::vector<int> cur(lo.size());
    gen_intervals(lo, hi, 0, cur, out);
    return out;
}

}  // namespace

std::vector<Partition> partitions_of(int n) {
    std::vector<Partition> out;
    std::vector<int> cur;
    if (n < 0) return out;
    gen_parts(n, n, cur, out);
    return out;
}

std::vector<Partition> partitions_up_to(int max_size) {
    std::vector<Partition> out;
    for (int n = 0; n <= max_size; ++n) {
        auto p = partitions_of(n);
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

std::vector<Partition> partitions_in_box(int max_len, int max_part) {
    std::vector<Partition> out;
    std::vector<int> cur;
    gen_box(max_len, max_part, cur, out);
    return out;
}

std::vector<Partition> strips_below(const Partition& lambda) {
    std::size_t n = lambda.length();
    std::vector<int> lo(n), hi(n);
    for (std::size_t i = 1; i <= n; ++i) {
        lo[i - 1] = lambda[i + 1];
        hi[i - 1] = lambda[i];
    }
    return run_intervals(lo, hi);
}

std::vector<Partition> strips_above(const Partition& lambda, int max_first, int max_len) {
    std::size_t n = std::min<std::size_t>(lambda.length() + 1, static_cast<std::size_t>(std::max(max_len, 0)));
    if (lambda.length() > n) return {};
    std::vector<int> lo(n), hi(n);
    for (std::size_t i = 1; i <= n; ++i) {
        lo[i - 1] = lambda[i];
        hi[i - 1] = i == 1 ? max_first : lambda[i - 1];
    }
    return run_intervals(lo, hi);
}

std::vector<Partition> vstrips_below(const Partition& lambda) {
    std::size_t n = lambda.length();
    std::vector<int> lo(n), hi(n);
    for (std::size_t i = 1; i <= n; ++i) {
        // mu_i in {lambda_i - 1, lambda_i}, and mu_i >= mu_{i+1} forces
        // mu_i = lambda_i whenever lambda_{i+1} = lambda_i and row i+1 is kept;
        // filtered below.
        lo[i - 1] = lambda[i] - 1;
        hi[i - 1] = lambda[i];
    }
    std::vector<Partition> out;
    if (n == 0) return {Partition()};
    std::vector<int> cur(n);
    // brute force over 2^n choices with monotonicity filter
    std::size_t total = std::size_t(1) << n;
    for (std::size_t mask = 0; mask < total; ++mask) {
        bool ok = true;
        for (std::size_t i = 0; i < n; ++i) cur[i] = hi[i] - static_cast<int>((mask >> i) & 1u);
        for (std::size_t i = 0; i + 1 < n && ok; ++i)
            if (cur[i] < cur[i + 1]) ok = false;
        if (ok) out.push_back(Partition::from_sorted(cur));
    }
    return out;
}

std::vector<Partition> vstrips_above(const Partition& lambda, int max_first, int max_len) {
    // lambda ≺' mu: mu_i - lambda_i in {0,1}; mu has at most max_len rows.
    std::vector<Partition> out;
    std::size_t n = static_cast<std::size_t>(std::max(max_len, 0));
    if (lambda.length() > n) return out;
    // rows beyond l(lambda)+... can only be 1; a vertical strip adds at most one box per row,
    // so rows l(lambda)+1..n each may receive a box (forming a column of ones).
    std::vector<int> cur(n);
    // choose added boxes row by row with monotonicity; DFS.
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == n) {
            out.push_back(Partition::from_sorted(cur));
            return;
        }
        for (int d = 0; d <= 1; ++d) {
            int v = lambda[i + 1] + d;
            if (i > 0 && v > cur[i - 1]) continue;
            if (i == 0 && v > max_first) continue;
            cur[i] = v;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

}  // namespace rys
