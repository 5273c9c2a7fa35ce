// Command-line front end: rate optimization, renewal simulation, SNR and
// epsilon sweeps, policy inspection, and synthetic PER table generation.
// Exit codes: 0 success, 2 usage error, 3 I/O error, 4 numeric validation.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lharq/analytic.hpp"
#include "lharq/format.hpp"
#include "lharq/channel.hpp"
#include "lharq/dp_optimizer.hpp"
#include "lharq/mc_simulator.hpp"
#include "lharq/per_model.hpp"
#include "lharq/policy.hpp"
#include "lharq/rate_policy.hpp"
#include "lharq/rng.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;
constexpr double kChannelTailProb = 1e-6;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string g_args_echo;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::string fmt(double v) { return lharq::format_double(v); }

// Output paths resolve against LHARQ_OUT_DIR when relative.
std::filesystem::path resolve_out(const std::string& path) {
    std::filesystem::path p(path);
    const char* base = std::getenv("LHARQ_OUT_DIR");
    if (base != nullptr && *base != '\0' && p.is_relative())
        return std::filesystem::path(base) / p;
    return p;
}

std::ofstream open_out(const std::string& path) {
    const auto full = resolve_out(path);
    std::ofstream out(full);
    if (!out) throw IoError("cannot open output file: " + full.string());
    return out;
}

void emit_meta(std::ostream& out, const std::string& command) {
    out << "# lharq " << command << "\n# args:" << g_args_echo << "\n";
}

// Parses "--decay inf" as the ideal step decoder.
double parse_decay(const std::string& text) {
    if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw UsageError("--decay expects a number or 'inf'");
    }
}

struct ModelOptions {
    std::string per_table_path;
    std::string decay_text = "4";
    std::optional<double> rate;
    double eps_trunc = 1e-6;

    void attach(CLI::App* cmd) {
        cmd->add_option("--rate", rate, "transmission rate, bits/symbol");
        cmd->add_option("--decay", decay_text, "synthetic PER decay slope (number or 'inf')")
            ->capture_default_str();
        cmd->add_option("--per-table", per_table_path,
                        "CSV file with measured PER curves (overrides --decay)");
        cmd->add_option("--eps-trunc", eps_trunc, "PER truncation threshold")
            ->capture_default_str();
    }

    lharq::PerModel build() const {
        lharq::PerModel model = [&] {
            if (!per_table_path.empty()) {
                std::ifstream in(per_table_path);
                if (!in) throw IoError("cannot open PER table: " + per_table_path);
                auto [table, stats] = lharq::load_per_table(in, rate);
                if (stats.n_clamped > 0)
                    std::cerr << "# note: clamped " << stats.n_clamped
                              << " joint rows to the marginal\n";
                return lharq::PerModel::tabulated(std::move(table));
            }
            if (!rate) throw UsageError("--rate is required with a synthetic model");
            return lharq::PerModel::synthetic(*rate, parse_decay(decay_text));
        }();
        return model.truncated(eps_trunc);
    }
};

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw UsageError(std::string("bad value in ") + what + ": " + item);
        }
    }
    if (out.empty()) throw UsageError(std::string("empty list for ") + what);
    return out;
}

// ---------------------------------------------------------------------------
// optimize

struct OptimizeArgs {
    ModelOptions model;
    std::string scheme = "lharq";
    int rounds = 0;
    double avg_snr_db = 0.0;
    std::size_t t_r = 16;
    std::size_t snr_nodes = 256;
    std::size_t bank_nodes = 64;
    std::string out_path;
};

int cmd_optimize(const OptimizeArgs& a) {
    if (a.rounds < 2) throw UsageError("optimize needs --k >= 2");
    const lharq::PerModel model = a.model.build();
    const double rate = model.rate();
    const lharq::FadingChannel channel(db_to_linear(a.avg_snr_db));
    const auto quad = lharq::Quadrature::build(channel, a.snr_nodes, kChannelTailProb);
    const auto actions = lharq::ActionSet::uniform(rate, a.t_r);
    const auto scheme = lharq::scheme_from_name(a.scheme);
    const auto grid = lharq::DpGrid::build(scheme, rate, a.rounds, a.bank_nodes, model);

    const auto res = scheme == lharq::Scheme::lharq
                         ? lharq::optimize_lharq(model, channel, quad, a.rounds, actions, grid)
                         : lharq::optimize_an(model, channel, quad, a.rounds, actions, grid);

    std::string out_path = a.out_path;
    if (out_path.empty()) {
        std::ostringstream name;
        name << a.scheme << "_R" << rate << "_K" << a.rounds << "_snr" << a.avg_snr_db
             << "dB.policy.json";
        out_path = name.str();
    }
    auto out = open_out(out_path);
    res.policy.save(out);

    emit_meta(std::cout, "optimize");
    std::cout << "# policy_file=" << resolve_out(out_path).string() << "\n"
              << lharq::report_csv_header() << "\n"
              << lharq::report_csv_row(a.scheme, rate, a.rounds, a.avg_snr_db, res.report)
              << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
    ModelOptions model;
    std::string scheme = "ir";
    int rounds = 0;
    double avg_snr_db = 0.0;
    std::string policy_path;
    std::optional<double> fixed_outage_eps;
    std::size_t t_r = 16;
    std::size_t cycles = 1'000'000;
    std::uint64_t seed = 1;
    std::size_t shards = 8;
    std::string trace_path;
};

int cmd_simulate(const SimulateArgs& a) {
    const lharq::PerModel model = a.model.build();
    const lharq::FadingChannel channel(db_to_linear(a.avg_snr_db));
    const auto scheme = lharq::scheme_from_name(a.scheme);

    lharq::SimConfig cfg(model, channel);
    cfg.scheme = scheme;
    cfg.n_cycles = a.cycles;
    cfg.seed = a.seed;
    cfg.n_shards = a.shards;
    cfg.retain_traces = !a.trace_path.empty();

    std::optional<lharq::LoadedPolicy> loaded;
    std::optional<lharq::FixedOutagePolicy> built_fo;
    int rounds = a.rounds;

    if (scheme == lharq::Scheme::ir) {
        if (rounds < 1) throw UsageError("simulate needs --k >= 1");
    } else if (!a.policy_path.empty()) {
        std::ifstream in(a.policy_path);
        if (!in) throw IoError("cannot open policy file: " + a.policy_path);
        loaded = lharq::load_policy_file(in);
        if (std::holds_alternative<lharq::Policy>(*loaded)) {
            const auto& p = std::get<lharq::Policy>(*loaded);
            if (rounds == 0) rounds = p.rounds;
            if (rounds != p.rounds)
                throw std::domain_error("simulate: --k disagrees with the policy file");
            if (p.scheme != scheme)
                throw std::domain_error("simulate: --scheme disagrees with the policy file");
            cfg.policy = &p;
        } else {
            const auto& p = std::get<lharq::FixedOutagePolicy>(*loaded);
            if (rounds < 1) throw UsageError("simulate needs --k with a fixed-outage policy");
            cfg.fixed_policy = &p;
        }
    } else if (a.fixed_outage_eps) {
        if (rounds < 1) throw UsageError("simulate needs --k >= 1");
        const auto quad = lharq::Quadrature::build(channel, 256, kChannelTailProb);
        built_fo = lharq::FixedOutagePolicy::build(
            model, quad.nodes, *a.fixed_outage_eps,
            lharq::ActionSet::uniform(model.rate(), a.t_r));
        cfg.fixed_policy = &*built_fo;
    } else if (rounds == 1) {
        // Single round: no backtrack decisions arise.
    } else {
        throw UsageError("simulate: layered schemes need --policy or --fixed-outage-eps");
    }
    cfg.rounds = rounds;

    const auto res = lharq::simulate(cfg);
    if (!a.trace_path.empty()) {
        auto out = open_out(a.trace_path);
        lharq::write_trace_csv(out, res.traces);
    }
    emit_meta(std::cout, "simulate");
    std::cout << "# seed=" << a.seed << " cycles=" << a.cycles << " shards=" << a.shards << "\n";
    if (res.policy_clamp_count > 0)
        std::cout << "# bank_clamps=" << res.policy_clamp_count << "\n";
    std::cout << lharq::report_csv_header() << "\n"
              << lharq::report_csv_row(a.scheme, model.rate(), rounds, a.avg_snr_db, res.report)
              << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep-snr

struct SweepSnrArgs {
    ModelOptions model;
    std::string schemes = "ir,lharq";
    int rounds = 0;
    double snr_db_start = 5.0;
    double snr_db_stop = 25.0;
    double snr_db_step = 1.0;
    std::size_t t_r = 16;
    std::size_t snr_nodes = 256;
    std::size_t bank_nodes = 64;
    double epsilon = 0.1;
    std::size_t samples = 1'000'000;
    std::uint64_t seed = 1;
    std::string out_path;
};

int cmd_sweep_snr(const SweepSnrArgs& a) {
    if (a.rounds < 1) throw UsageError("sweep-snr needs --k >= 1");
    if (a.snr_db_step <= 0.0) throw UsageError("sweep-snr needs --snr-db-step > 0");
    if (a.snr_db_stop < a.snr_db_start) throw UsageError("sweep-snr: empty SNR range");

    std::vector<std::string> schemes;
    {
        std::istringstream in(a.schemes);
        std::string item;
        while (std::getline(in, item, ',')) schemes.push_back(item);
        if (schemes.empty()) throw UsageError("sweep-snr: empty scheme list");
        for (const auto& s : schemes)
            if (s != "ir" && s != "lharq" && s != "an" && s != "fixed-outage")
                throw UsageError("sweep-snr: unknown scheme '" + s + "'");
    }

    const lharq::PerModel model = a.model.build();
    const double rate = model.rate();
    const auto actions = lharq::ActionSet::uniform(rate, a.t_r);

    std::ostringstream body;
    body << lharq::report_csv_header() << "\n";
    std::size_t point = 0;
    for (double db = a.snr_db_start; db <= a.snr_db_stop + 1e-9; db += a.snr_db_step, ++point) {
        const lharq::FadingChannel channel(db_to_linear(db));
        const auto quad = lharq::Quadrature::build(channel, a.snr_nodes, kChannelTailProb);
        for (const auto& scheme : schemes) {
            if (scheme == "ir") {
                std::vector<double> f(static_cast<std::size_t>(a.rounds) + 1, 1.0);
                for (int k = 1; k <= a.rounds; ++k) {
                    lharq::Rng rng =
                        lharq::Rng(a.seed).derive(point * 64 + static_cast<std::size_t>(k));
                    f[static_cast<std::size_t>(k)] =
                        k == 1 ? quad.expect_fn([&](double g) { return model.full(g); })
                               : lharq::irharq_fk(model, channel, k, a.samples, rng);
                }
                // Enforce the non-increasing shape against MC noise.
                for (std::size_t k = 1; k < f.size(); ++k) f[k] = std::min(f[k], f[k - 1]);
                body << lharq::report_csv_row("ir", rate, a.rounds, db,
                                              lharq::irharq_throughput(rate, f))
                     << "\n";
            } else if (scheme == "lharq" || scheme == "an") {
                if (a.rounds < 2) throw UsageError("sweep-snr: " + scheme + " needs --k >= 2");
                const auto s = lharq::scheme_from_name(scheme);
                const auto grid = lharq::DpGrid::build(s, rate, a.rounds, a.bank_nodes, model);
                const auto res =
                    s == lharq::Scheme::lharq
                        ? lharq::optimize_lharq(model, channel, quad, a.rounds, actions, grid)
                        : lharq::optimize_an(model, channel, quad, a.rounds, actions, grid);
                body << lharq::report_csv_row(scheme, rate, a.rounds, db, res.report) << "\n";
            } else {
                const auto fo =
                    lharq::FixedOutagePolicy::build(model, quad.nodes, a.epsilon, actions);
                const auto rep =
                    lharq::fixed_outage_throughput(fo, a.rounds, model, quad, channel.avg_snr());
                body << lharq::report_csv_row("fixed-outage", rate, a.rounds, db, rep) << "\n";
            }
        }
    }

    if (a.out_path.empty()) {
        emit_meta(std::cout, "sweep-snr");
        std::cout << body.str();
    } else {
        auto out = open_out(a.out_path);
        emit_meta(out, "sweep-snr");
        out << body.str();
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep-epsilon

struct SweepEpsilonArgs {
    ModelOptions model;
    int rounds = 0;
    double avg_snr_db = 15.0;
    std::size_t t_r = 16;
    std::size_t snr_nodes = 256;
    std::string epsilons_text;
    std::string out_path;
};

int cmd_sweep_epsilon(const SweepEpsilonArgs& a) {
    if (a.rounds < 2) throw UsageError("sweep-epsilon needs --k >= 2");
    const lharq::PerModel model = a.model.build();
    const lharq::FadingChannel channel(db_to_linear(a.avg_snr_db));
    const auto quad = lharq::Quadrature::build(channel, a.snr_nodes, kChannelTailProb);
    const auto actions = lharq::ActionSet::uniform(model.rate(), a.t_r);

    const std::vector<double> epsilons = a.epsilons_text.empty()
                                             ? lharq::default_epsilon_grid()
                                             : parse_double_list(a.epsilons_text, "--epsilons");
    const auto sweep = lharq::sweep_epsilon(model, channel, quad, a.rounds, actions, epsilons);

    std::ostringstream body;
    body << "epsilon,eta,is_best\n";
    for (std::size_t i = 0; i < sweep.points.size(); ++i)
        body << fmt(sweep.points[i].epsilon) << ',' << fmt(sweep.points[i].eta) << ','
             << (i == sweep.best_index ? 1 : 0) << "\n";
    body << "# best epsilon=" << fmt(sweep.best().epsilon) << " eta=" << fmt(sweep.best().eta)
         << "\n";

    if (a.out_path.empty()) {
        emit_meta(std::cout, "sweep-epsilon");
        std::cout << body.str();
    } else {
        auto out = open_out(a.out_path);
        emit_meta(out, "sweep-epsilon");
        out << body.str();
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// show-policy

int cmd_show_policy(const std::string& path, bool full) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open policy file: " + path);
    const auto loaded = lharq::load_policy_file(in);

    if (std::holds_alternative<lharq::FixedOutagePolicy>(loaded)) {
        const auto& p = std::get<lharq::FixedOutagePolicy>(loaded);
        std::cout << "scheme        fixed_outage\n"
                  << "rate          " << fmt(p.actions.rate) << "\n"
                  << "epsilon       " << fmt(p.epsilon) << "\n"
                  << "actions       " << p.actions.count << " (delta "
                  << fmt(p.actions.delta) << ", feedback bits " << p.actions.feedback_bits()
                  << ")\n"
                  << "snr nodes     " << p.snr_nodes.size() << "\n";
        const std::size_t step = full ? 1 : std::max<std::size_t>(1, p.snr_nodes.size() / 16);
        for (std::size_t i = 0; i < p.snr_nodes.size(); i += step)
            std::cout << "  snr=" << fmt(p.snr_nodes[i])
                      << "  rho=" << fmt(p.actions.values[p.table[i]]) << "\n";
        return kExitOk;
    }

    const auto& p = std::get<lharq::Policy>(loaded);
    std::cout << "scheme        " << lharq::scheme_name(p.scheme) << "\n"
              << "rate          " << fmt(p.actions.rate) << "\n"
              << "rounds        " << p.rounds << "\n"
              << "avg_snr       " << fmt(p.avg_snr) << " ("
              << fmt(10.0 * std::log10(p.avg_snr)) << " dB)\n"
              << "eps_trunc     " << fmt(p.eps_trunc) << "\n"
              << "trunc_snr     " << fmt(p.truncation_snr) << "\n"
              << "actions       " << p.actions.count << " (delta " << fmt(p.actions.delta)
              << ", feedback bits " << p.actions.feedback_bits() << ")\n"
              << "snr nodes     " << p.snr_nodes.size() << "\n"
              << "generator     " << p.generator << "\n";
    for (int k = 1; k <= p.rounds; ++k) {
        const auto& g = p.bank_grids[static_cast<std::size_t>(k - 1)];
        std::cout << "bank grid k=" << k << "  [" << fmt(g.lo) << ", " << fmt(g.hi) << "] x "
                  << g.n << (k == p.rounds ? "  (terminal, no table)" : "") << "\n";
    }
    for (int k = 1; k < p.rounds; ++k) {
        const auto& table = p.tables[static_cast<std::size_t>(k - 1)];
        const auto& g = p.bank_grids[static_cast<std::size_t>(k - 1)];
        std::map<std::uint16_t, std::size_t> hist;
        for (auto idx : table) ++hist[idx];
        std::cout << "table k=" << k << "  action histogram:";
        for (const auto& [idx, count] : hist)
            std::cout << "  rho=" << fmt(p.actions.values[idx]) << ":" << count;
        std::cout << "\n";
        if (full) {
            const std::size_t nj = g.n;
            for (std::size_t i = 0; i < p.snr_nodes.size(); ++i) {
                std::cout << "  snr=" << fmt(p.snr_nodes[i]) << " :";
                for (std::size_t j = 0; j < nj; ++j) std::cout << ' ' << table[i * nj + j];
                std::cout << "\n";
            }
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// gen-table

struct GenTableArgs {
    double rate = 0.0;
    std::string decay_text = "4";
    std::size_t t_r = 16;
    double snr_db_min = -10.0;
    double snr_db_max = 30.0;
    double snr_db_step = 0.25;
    std::string out_path;
};

int cmd_gen_table(const GenTableArgs& a) {
    if (a.snr_db_step <= 0.0) throw UsageError("gen-table needs --snr-db-step > 0");
    if (a.snr_db_max < a.snr_db_min) throw UsageError("gen-table: empty SNR range");
    const auto model = lharq::PerModel::synthetic(a.rate, parse_decay(a.decay_text));
    const auto actions = lharq::ActionSet::uniform(a.rate, a.t_r);

    std::vector<double> rhos = {0.0};
    for (double v : actions.values) rhos.push_back(v);

    std::ostringstream body;
    body << "# rate_R=" << fmt(a.rate) << "\n"
         << "snr_db,rho,prob\n";
    for (double rho : rhos) {
        for (double db = a.snr_db_min; db <= a.snr_db_max + 1e-9; db += a.snr_db_step) {
            const double snr = db_to_linear(db);
            const double prob = rho == 0.0 ? model.full(snr) : model.backtrack(snr, rho);
            body << fmt(db) << ',' << fmt(rho) << ',' << fmt(prob) << "\n";
        }
    }

    if (a.out_path.empty()) {
        emit_meta(std::cout, "gen-table");
        std::cout << body.str();
    } else {
        auto out = open_out(a.out_path);
        emit_meta(out, "gen-table");
        out << body.str();
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) g_args_echo += std::string(" ") + argv[i];

    CLI::App app{"layered-HARQ throughput optimizer and simulator"};
    app.set_version_flag("--version", "lharq 1.0.0");
    app.require_subcommand(1);

    OptimizeArgs opt_args;
    auto* opt = app.add_subcommand("optimize", "compute an optimal backtrack-rate policy");
    opt->add_option("--scheme", opt_args.scheme)
        ->check(CLI::IsMember({"lharq", "an"}))
        ->capture_default_str();
    opt_args.model.attach(opt);
    opt->add_option("--k", opt_args.rounds, "rounds per cycle")->required();
    opt->add_option("--avg-snr-db", opt_args.avg_snr_db, "average SNR, dB")->required();
    opt->add_option("--tr", opt_args.t_r, "backtrack-rate alphabet size")
        ->capture_default_str();
    opt->add_option("--snr-nodes", opt_args.snr_nodes)->capture_default_str();
    opt->add_option("--bank-nodes", opt_args.bank_nodes)->capture_default_str();
    opt->add_option("--out,-o", opt_args.out_path, "policy file path");

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "renewal-reward Monte-Carlo throughput");
    sim->add_option("--scheme", sim_args.scheme)
        ->check(CLI::IsMember({"ir", "lharq", "an"}))
        ->capture_default_str();
    sim_args.model.attach(sim);
    sim->add_option("--k", sim_args.rounds, "rounds per cycle");
    sim->add_option("--avg-snr-db", sim_args.avg_snr_db)->required();
    sim->add_option("--policy", sim_args.policy_path, "policy file (lharq/an)");
    sim->add_option("--fixed-outage-eps", sim_args.fixed_outage_eps,
                    "build a fixed-outage policy instead of loading one");
    sim->add_option("--tr", sim_args.t_r)->capture_default_str();
    sim->add_option("--cycles", sim_args.cycles)->capture_default_str();
    sim->add_option("--seed", sim_args.seed)->capture_default_str();
    sim->add_option("--shards", sim_args.shards)->capture_default_str();
    sim->add_option("--trace", sim_args.trace_path, "per-round trace CSV");

    SweepSnrArgs snr_args;
    auto* swsnr = app.add_subcommand("sweep-snr", "throughput vs average SNR per scheme");
    swsnr->add_option("--schemes", snr_args.schemes, "comma list of ir,lharq,an,fixed-outage")
        ->capture_default_str();
    snr_args.model.attach(swsnr);
    swsnr->add_option("--k", snr_args.rounds)->required();
    swsnr->add_option("--snr-db-start", snr_args.snr_db_start)->capture_default_str();
    swsnr->add_option("--snr-db-stop", snr_args.snr_db_stop)->capture_default_str();
    swsnr->add_option("--snr-db-step", snr_args.snr_db_step)->capture_default_str();
    swsnr->add_option("--tr", snr_args.t_r)->capture_default_str();
    swsnr->add_option("--snr-nodes", snr_args.snr_nodes)->capture_default_str();
    swsnr->add_option("--bank-nodes", snr_args.bank_nodes)->capture_default_str();
    swsnr->add_option("--epsilon", snr_args.epsilon, "fixed-outage epsilon")
        ->capture_default_str();
    swsnr->add_option("--samples", snr_args.samples, "per-point samples for ir residuals")
        ->capture_default_str();
    swsnr->add_option("--seed", snr_args.seed)->capture_default_str();
    swsnr->add_option("--out,-o", snr_args.out_path, "CSV output (default stdout)");

    SweepEpsilonArgs eps_args;
    auto* sweps = app.add_subcommand("sweep-epsilon", "fixed-outage throughput vs epsilon");
    eps_args.model.attach(sweps);
    sweps->add_option("--k", eps_args.rounds)->required();
    sweps->add_option("--avg-snr-db", eps_args.avg_snr_db)->required();
    sweps->add_option("--tr", eps_args.t_r)->capture_default_str();
    sweps->add_option("--snr-nodes", eps_args.snr_nodes)->capture_default_str();
    sweps->add_option("--epsilons", eps_args.epsilons_text,
                      "comma list (default: log grid 1e-4..0.5, 25 points)");
    sweps->add_option("--out,-o", eps_args.out_path, "CSV output (default stdout)");

    std::string show_path;
    bool show_full = false;
    auto* show = app.add_subcommand("show-policy", "pretty-print a policy file");
    show->add_option("file", show_path)->required();
    show->add_flag("--full", show_full, "print full tables");

    GenTableArgs gen_args;
    auto* gen = app.add_subcommand("gen-table", "sample the synthetic model to a PER table");
    gen->add_option("--rate", gen_args.rate)->required();
    gen->add_option("--decay", gen_args.decay_text)->capture_default_str();
    gen->add_option("--tr", gen_args.t_r)->capture_default_str();
    gen->add_option("--snr-db-min", gen_args.snr_db_min)->capture_default_str();
    gen->add_option("--snr-db-max", gen_args.snr_db_max)->capture_default_str();
    gen->add_option("--snr-db-step", gen_args.snr_db_step)->capture_default_str();
    gen->add_option("--out,-o", gen_args.out_path, "CSV output (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*opt) return cmd_optimize(opt_args);
        if (*sim) return cmd_simulate(sim_args);
        if (*swsnr) return cmd_sweep_snr(snr_args);
        if (*sweps) return cmd_sweep_epsilon(eps_args);
        if (*show) return cmd_show_policy(show_path, show_full);
        if (*gen) return cmd_gen_table(gen_args);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::domain_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}
