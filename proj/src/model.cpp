#include "rys/model.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace rys {

std::string kind_name(StepKind k) {
    std::string s(1, k.letter == Letter::L ? 'L' : 'R');
    s += k.plus() ? '+' : '-';
    return s;
}

bool step_allowed(StepKind k, const Partition& left, const Partition& right) {
    if (k.letter == Letter::L) return k.plus() ? interlaces(left, right) : interlaces(right, left);
    return k.plus() ? interlaces_conjugate(left, right) : interlaces_conjugate(right, left);
}

Rational pair_factor(Letter a, Letter b, const Rational& xi, const Rational& xj) {
    if (a != b) return 1 + xi * xj;
    return 1 / (1 - xi * xj);
}

double pair_factor(Letter a, Letter b, double xi, double xj) {
    if (a != b) return 1 + xi * xj;
    return 1 / (1 - xi * xj);
}

void RailYardModel::validate() const {
    if (r < l - 1) throw std::invalid_argument("model: need l <= r + 1");
    const std::size_t n = static_cast<std::size_t>(columns());
    if (kinds.size() != n || weights.size() != n) throw std::invalid_argument("model: sequence lengths disagree with l..r");
    for (const auto& w : weights)
        if (w < 0) throw std::invalid_argument("model: negative weight");
}

int RailYardModel::count(StepKind k) const {
    int c = 0;
    for (auto s : kinds)
        if (s == k) ++c;
    return c;
}

int RailYardModel::count_sign(Sign s) const {
    int c = 0;
    for (auto k : kinds)
        if (k.sign == s) ++c;
    return c;
}

bool RailYardModel::divergent() const {
    for (int i = l; i <= r; ++i) {
        if (!kind(i).plus()) continue;
        for (int j = i + 1; j <= r; ++j)
            if (kind(j).minus() && kind(j).letter == kind(i).letter && weight(i) * weight(j) >= 1) return true;
    }
    return false;
}

std::string RailYardModel::lr_seq() const {
    std::string s;
    for (auto k : kinds) s += (k.letter == Letter::L ? 'L' : 'R');
    return s;
}

std::string RailYardModel::sign_seq() const {
    std::string s;
    for (auto k : kinds) s += (k.plus() ? '+' : '-');
    return s;
}

std::string RailYardModel::to_json() const {
    nlohmann::ordered_json j;
    j["l"] = l;
    j["r"] = r;
    j["lr_seq"] = lr_seq();
    j["sign_seq"] = sign_seq();
    auto w = nlohmann::json::array();
    for (const auto& x : weights) w.push_back(to_string(x));
    j["weights"] = w;
    j["left_boundary"] = left_boundary.str();
    j["right_boundary"] = right_boundary.str();
    return j.dump(2);
}

RailYardModel RailYardModel::make(const std::string& lr, const std::string& signs, std::vector<Rational> w,
                                  Partition left, Partition right, int l) {
    if (lr.size() != signs.size() || lr.size() != w.size()) throw std::invalid_argument("model: sequence lengths differ");
    RailYardModel m;
    m.l = l;
    m.r = l + static_cast<int>(lr.size()) - 1;
    for (std::size_t i = 0; i < lr.size(); ++i) {
        StepKind k;
        if (lr[i] == 'L') k.letter = Letter::L;
        else if (lr[i] == 'R') k.letter = Letter::R;
        else throw std::invalid_argument("lr_seq must use L/R");
        if (signs[i] == '+') k.sign = Sign::Plus;
        else if (signs[i] == '-') k.sign = Sign::Minus;
        else throw std::invalid_argument("sign_seq must use +/-");
        m.kinds.push_back(k);
    }
    m.weights = std::move(w);
    m.left_boundary = std::move(left);
    m.right_boundary = std::move(right);
    m.validate();
    return m;
}

RailYardModel RailYardModel::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    std::vector<Rational> w;
    for (const auto& x : j.at("weights")) {
        if (x.is_string()) w.push_back(parse_rational(x.get<std::string>()));
        else if (x.is_number_integer()) w.push_back(Rational(x.get<long>()));
        else throw std::invalid_argument("weights must be \"p/q\" strings or integers");
    }
    auto part = [&](const char* key) {
        if (!j.contains(key)) return Partition();
        const auto& v = j.at(key);
        if (v.is_string()) return Partition::parse(v.get<std::string>());
        return Partition(v.get<std::vector<int>>());
    };
    auto m = make(j.at("lr_seq").get<std::string>(), j.at("sign_seq").get<std::string>(), std::move(w),
                  part("left_boundary"), part("right_boundary"), j.value("l", 1));
    if (j.contains("r") && j.at("r").get<int>() != m.r) throw std::invalid_argument("model: r inconsistent with sequences");
    return m;
}

RailYardModel RailYardModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

}  // namespace rys
