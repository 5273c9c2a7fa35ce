#include "lharq/rate_policy.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "policy_json.hpp"

namespace lharq {

double fixed_outage_rate(const PerModel& model, double snr, double epsilon,
                         const ActionSet& actions) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::domain_error("fixed_outage_rate: epsilon must be in (0, 1)");
    for (std::size_t a = 0; a < actions.size(); ++a)
        if (model.backtrack_cond(snr, actions[a]) <= epsilon) return actions[a];
    return actions.rate;  // unreachable: the full rate always qualifies
}

FixedOutagePolicy FixedOutagePolicy::build(const PerModel& model,
                                           std::span<const double> snr_nodes, double epsilon,
                                           const ActionSet& actions) {
    FixedOutagePolicy p;
    p.epsilon = epsilon;
    p.actions = actions;
    p.snr_nodes.assign(snr_nodes.begin(), snr_nodes.end());
    p.table.resize(snr_nodes.size());
    for (std::size_t i = 0; i < snr_nodes.size(); ++i) {
        const double rho = fixed_outage_rate(model, snr_nodes[i], epsilon, actions);
        std::size_t idx = 0;
        while (actions[idx] != rho) ++idx;
        p.table[i] = static_cast<std::uint16_t>(idx);
    }
    return p;
}

double FixedOutagePolicy::lookup(double snr) const {
    return actions.values[table[nearest_node(snr_nodes, snr)]];
}

Policy FixedOutagePolicy::broadcast(Scheme scheme, int rounds, double avg_snr,
                                    const PerModel& model, std::size_t bank_nodes) const {
    const DpGrid grid = DpGrid::build(scheme, actions.rate, rounds, bank_nodes, model);
    Policy p;
    p.scheme = scheme;
    p.rounds = rounds;
    p.actions = actions;
    p.avg_snr = avg_snr;
    p.eps_trunc = grid.eps_trunc;
    p.truncation_snr = grid.truncation_snr;
    p.generator = "lharq 1.0.0 fixed-outage";
    p.snr_nodes = snr_nodes;
    p.bank_grids = grid.bank_grids;
    p.tables.resize(static_cast<std::size_t>(rounds - 1));
    for (int k = 1; k < rounds; ++k) {
        auto& t = p.tables[static_cast<std::size_t>(k - 1)];
        const std::size_t nj = p.bank_grids[static_cast<std::size_t>(k - 1)].n;
        t.resize(snr_nodes.size() * nj);
        for (std::size_t i = 0; i < snr_nodes.size(); ++i)
            for (std::size_t j = 0; j < nj; ++j) t[i * nj + j] = table[i];
    }
    p.validate();
    return p;
}

std::vector<double> default_epsilon_grid() {
    constexpr std::size_t n = 25;
    const double lo = std::log10(1e-4);
    const double hi = std::log10(0.5);
    std::vector<double> eps(n);
    for (std::size_t i = 0; i < n; ++i)
        eps[i] = std::pow(10.0, lo + (hi - lo) * static_cast<double>(i) /
                                    static_cast<double>(n - 1));
    return eps;
}

ThroughputReport fixed_outage_throughput(const FixedOutagePolicy& policy, int rounds,
                                         const PerModel& model, const Quadrature& quad,
                                         double avg_snr) {
    const Policy expanded = policy.broadcast(Scheme::lharq, rounds, avg_snr, model);
    return lharq_throughput(expanded, model, quad);
}

EpsilonSweepResult sweep_epsilon(const PerModel& model, const FadingChannel& channel,
                                 const Quadrature& quad, int rounds, const ActionSet& actions,
                                 std::span<const double> epsilons) {
    if (epsilons.empty()) throw std::domain_error("sweep_epsilon: empty epsilon list");
    EpsilonSweepResult res;
    res.points.reserve(epsilons.size());
    for (double eps : epsilons) {
        const auto policy = FixedOutagePolicy::build(model, quad.nodes, eps, actions);
        const auto rep = fixed_outage_throughput(policy, rounds, model, quad, channel.avg_snr());
        res.points.push_back({eps, rep.eta});
    }
    for (std::size_t i = 1; i < res.points.size(); ++i)
        if (res.points[i].eta > res.points[res.best_index].eta) res.best_index = i;
    return res;
}

namespace {

FixedOutagePolicy fixed_outage_from_json(const nlohmann::json& j) {
    FixedOutagePolicy p;
    p.epsilon = j.at("epsilon").get<double>();
    p.actions = detail::action_set_from_json(j.at("actions"));
    p.snr_nodes = j.at("snr_nodes").get<std::vector<double>>();
    p.table = j.at("table").get<std::vector<std::uint16_t>>();
    if (p.table.size() != p.snr_nodes.size())
        throw std::runtime_error("policy file: table size does not match nodes");
    for (std::uint16_t idx : p.table)
        if (idx >= p.actions.size())
            throw std::runtime_error("policy file: action index out of range");
    return p;
}

}  // namespace

void FixedOutagePolicy::save(std::ostream& out) const {
    nlohmann::json j{{"format", detail::kPolicyFormatTag},
                     {"version", detail::kPolicyFormatVersion},
                     {"scheme", "fixed_outage"},
                     {"rate", actions.rate},
                     {"epsilon", epsilon},
                     {"actions", detail::action_set_to_json(actions)},
                     {"snr_nodes", snr_nodes},
                     {"table", table}};
    out << j.dump(1) << '\n';
}

FixedOutagePolicy FixedOutagePolicy::load(std::istream& in) {
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.value("format", std::string{}) != detail::kPolicyFormatTag)
        throw std::runtime_error("policy file: unrecognized format tag");
    if (j.at("scheme").get<std::string>() != "fixed_outage")
        throw std::runtime_error("policy file: not a fixed-outage policy");
    return fixed_outage_from_json(j);
}

LoadedPolicy load_policy_file(std::istream& in) {
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.value("format", std::string{}) != detail::kPolicyFormatTag)
        throw std::runtime_error("policy file: unrecognized format tag");
    if (j.at("scheme").get<std::string>() == "fixed_outage") return fixed_outage_from_json(j);
    return detail::policy_from_json(j);
}

}  // namespace lharq
