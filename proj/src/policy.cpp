#include "lharq/policy.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "policy_json.hpp"

namespace lharq {

const char* scheme_name(Scheme s) noexcept {
    switch (s) {
        case Scheme::ir: return "ir";
        case Scheme::lharq: return "lharq";
        case Scheme::an: return "an";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "ir") return Scheme::ir;
    if (name == "lharq") return Scheme::lharq;
    if (name == "an") return Scheme::an;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

ActionSet ActionSet::uniform(double rate, std::size_t count) {
    if (!(rate > 0.0)) throw std::invalid_argument("ActionSet: rate must be positive");
    if (count < 1) throw std::invalid_argument("ActionSet: need at least one rate");
    ActionSet a;
    a.rate = rate;
    a.count = count;
    a.delta = rate / static_cast<double>(count);
    a.values.resize(count);
    for (std::size_t i = 0; i + 1 < count; ++i)
        a.values[i] = a.delta * static_cast<double>(i + 1);
    a.values[count - 1] = rate;  // top action is the full rate, exactly
    return a;
}

int ActionSet::feedback_bits() const noexcept {
    int bits = 0;
    while ((std::size_t{1} << bits) < count) ++bits;
    return bits;
}

std::vector<double> BankGrid::nodes() const {
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = node(j);
    return out;
}

DpGrid DpGrid::build(Scheme scheme, double rate, int rounds, std::size_t bank_nodes,
                     const PerModel& model) {
    if (scheme != Scheme::lharq && scheme != Scheme::an)
        throw std::invalid_argument("DpGrid::build: scheme must be lharq or an");
    if (rounds < 1) throw std::invalid_argument("DpGrid::build: rounds must be >= 1");
    if (bank_nodes < 2) throw std::invalid_argument("DpGrid::build: need >= 2 bank nodes");
    DpGrid g;
    g.eps_trunc = model.truncation_eps();
    g.truncation_snr = model.truncation_snr();
    g.bank_grids.resize(static_cast<std::size_t>(rounds));
    for (int k = 1; k <= rounds; ++k) {
        BankGrid& b = g.bank_grids[static_cast<std::size_t>(k - 1)];
        if (scheme == Scheme::lharq) {
            b.lo = 0.0;
            b.hi = static_cast<double>(k - 1) * rate;
        } else {
            b.lo = rate;
            b.hi = static_cast<double>(k) * rate;
        }
        b.n = (b.hi > b.lo) ? bank_nodes : 1;
    }
    return g;
}

double Policy::initial_bank() const noexcept {
    return scheme == Scheme::an ? actions.rate : 0.0;
}

std::size_t Policy::table_index(int round, std::size_t snr_idx, std::size_t bank_idx) const {
    const auto& grid = bank_grids[static_cast<std::size_t>(round - 1)];
    return snr_idx * grid.n + bank_idx;
}

std::size_t nearest_node(const std::vector<double>& nodes, double x) {
    if (x <= nodes.front()) return 0;
    if (x >= nodes.back()) return nodes.size() - 1;
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - nodes.begin());
    const std::size_t lo = hi - 1;
    return (x - nodes[lo] <= nodes[hi] - x) ? lo : hi;
}

std::size_t Policy::lookup_index(int round, double snr, double bank,
                                 std::uint64_t* clamp_count) const {
    if (round < 1 || round >= rounds)
        throw std::domain_error("Policy::lookup: round outside [1, rounds-1]");
    const BankGrid& grid = bank_grids[static_cast<std::size_t>(round - 1)];
    if (bank < grid.lo || bank > grid.hi) {
        if (clamp_count != nullptr) ++*clamp_count;
        bank = std::min(std::max(bank, grid.lo), grid.hi);
    }
    const std::size_t snr_idx = nearest_node(snr_nodes, snr);
    std::size_t bank_idx = 0;
    if (grid.n > 1) {
        const double t = (bank - grid.lo) / grid.step();
        const double lo_node = std::floor(t);
        bank_idx = static_cast<std::size_t>(lo_node);
        if (bank_idx >= grid.n - 1) {
            bank_idx = grid.n - 1;
        } else if (t - lo_node > 0.5) {
            ++bank_idx;  // ties stay on the lower node
        }
    }
    return tables[static_cast<std::size_t>(round - 1)][table_index(round, snr_idx, bank_idx)];
}

double Policy::lookup(int round, double snr, double bank, std::uint64_t* clamp_count) const {
    return actions.values[lookup_index(round, snr, bank, clamp_count)];
}

void Policy::validate() const {
    if (scheme != Scheme::lharq && scheme != Scheme::an)
        throw std::invalid_argument("Policy: scheme must be lharq or an");
    if (rounds < 1) throw std::invalid_argument("Policy: rounds must be >= 1");
    if (actions.values.empty()) throw std::invalid_argument("Policy: empty action set");
    if (snr_nodes.empty()) throw std::invalid_argument("Policy: no SNR nodes");
    if (!std::is_sorted(snr_nodes.begin(), snr_nodes.end()))
        throw std::invalid_argument("Policy: SNR nodes not sorted");
    const std::size_t k_tables = static_cast<std::size_t>(rounds - 1);
    if (bank_grids.size() != static_cast<std::size_t>(rounds) || tables.size() != k_tables)
        throw std::invalid_argument("Policy: grid/table count does not match rounds");
    for (std::size_t k = 0; k < k_tables; ++k) {
        if (tables[k].size() != snr_nodes.size() * bank_grids[k].n)
            throw std::invalid_argument("Policy: table dimensions do not match grids");
        for (std::uint16_t idx : tables[k])
            if (idx >= actions.values.size())
                throw std::invalid_argument("Policy: action index out of range");
    }
}

namespace detail {

nlohmann::json action_set_to_json(const ActionSet& a) {
    return nlohmann::json{{"rate", a.rate}, {"count", a.count}, {"values", a.values}};
}

ActionSet action_set_from_json(const nlohmann::json& j) {
    ActionSet a;
    a.rate = j.at("rate").get<double>();
    a.count = j.at("count").get<std::size_t>();
    a.values = j.at("values").get<std::vector<double>>();
    if (a.count == 0 || a.values.size() != a.count)
        throw std::runtime_error("policy file: malformed action set");
    a.delta = a.rate / static_cast<double>(a.count);
    return a;
}

nlohmann::json policy_to_json(const Policy& p) {
    nlohmann::json grids = nlohmann::json::array();
    for (const BankGrid& g : p.bank_grids)
        grids.push_back({{"lo", g.lo}, {"hi", g.hi}, {"n", g.n}});
    return nlohmann::json{{"format", kPolicyFormatTag},
                          {"version", kPolicyFormatVersion},
                          {"scheme", scheme_name(p.scheme)},
                          {"rate", p.actions.rate},
                          {"rounds", p.rounds},
                          {"avg_snr", p.avg_snr},
                          {"eps_trunc", p.eps_trunc},
                          {"truncation_snr", p.truncation_snr},
                          {"generator", p.generator},
                          {"actions", action_set_to_json(p.actions)},
                          {"snr_nodes", p.snr_nodes},
                          {"bank_grids", grids},
                          {"tables", p.tables}};
}

Policy policy_from_json(const nlohmann::json& j) {
    Policy p;
    p.scheme = scheme_from_name(j.at("scheme").get<std::string>());
    p.rounds = j.at("rounds").get<int>();
    p.avg_snr = j.at("avg_snr").get<double>();
    p.eps_trunc = j.at("eps_trunc").get<double>();
    p.truncation_snr = j.at("truncation_snr").get<double>();
    p.generator = j.value("generator", std::string{});
    p.actions = action_set_from_json(j.at("actions"));
    p.snr_nodes = j.at("snr_nodes").get<std::vector<double>>();
    for (const auto& g : j.at("bank_grids")) {
        BankGrid b;
        b.lo = g.at("lo").get<double>();
        b.hi = g.at("hi").get<double>();
        b.n = g.at("n").get<std::size_t>();
        p.bank_grids.push_back(b);
    }
    p.tables = j.at("tables").get<std::vector<std::vector<std::uint16_t>>>();
    p.validate();
    return p;
}

}  // namespace detail

void Policy::save(std::ostream& out) const {
    out << detail::policy_to_json(*this).dump(1) << '\n';
}

Policy Policy::load(std::istream& in) {
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.value("format", std::string{}) != detail::kPolicyFormatTag)
        throw std::runtime_error("policy file: unrecognized format tag");
    const auto scheme = j.at("scheme").get<std::string>();
    if (scheme != "lharq" && scheme != "an")
        throw std::runtime_error("policy file: scheme '" + scheme +
                                 "' is not an optimizer policy");
    return detail::policy_from_json(j);
}

}  // namespace lharq
