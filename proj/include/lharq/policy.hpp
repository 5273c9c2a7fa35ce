#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lharq/per_model.hpp"

namespace lharq {

enum class Scheme { ir, lharq, an };

const char* scheme_name(Scheme s) noexcept;
Scheme scheme_from_name(const std::string& name);

// Quantized backtrack-rate alphabet {delta, 2 delta, ..., rate} with
// delta = rate / count. Signaling one entry costs ceil(log2 count) feedback
// bits.
struct ActionSet {
    double rate = 0.0;
    std::size_t count = 0;
    double delta = 0.0;
    std::vector<double> values;

    static ActionSet uniform(double rate, std::size_t count);

    std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    int feedback_bits() const noexcept;
};

// Uniform grid over the banked-reward state of one round.
struct BankGrid {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n = 1;

    double step() const noexcept {
        return n > 1 ? (hi - lo) / static_cast<double>(n - 1) : 0.0;
    }
    double node(std::size_t j) const noexcept {
        return n > 1 ? lo + static_cast<double>(j) * step() : lo;
    }
    std::vector<double> nodes() const;
};

// State discretization of the backward optimization. bank_grids[k-1] is the
// grid of the bank entering round k, k = 1..rounds: [0, (k-1) rate] for the
// layered scheme, [rate, k rate] for all-or-none (endpoints included; both
// are attainable limits). The PER curve is treated as exactly zero above
// truncation_snr, where the full-decoding PER has fallen to eps_trunc.
struct DpGrid {
    std::vector<BankGrid> bank_grids;
    double eps_trunc = 0.0;
    double truncation_snr = 0.0;

    static DpGrid build(Scheme scheme, double rate, int rounds, std::size_t bank_nodes,
                        const PerModel& model);
};

// Per-round action tables over (SNR node, bank node), produced off-line by
// the optimizer and replayed by the receiver: observe the SNR, update the
// bank, look up the rate index. Immutable once built.
struct Policy {
    Scheme scheme = Scheme::lharq;
    int rounds = 0;
    ActionSet actions;
    double avg_snr = 0.0;
    double eps_trunc = 0.0;
    double truncation_snr = 0.0;
    std::string generator;

    std::vector<double> snr_nodes;
    // State grids for k = 1..rounds; the terminal grid carries no table but
    // is kept so an evaluation replays the generator's discretization.
    std::vector<BankGrid> bank_grids;
    std::vector<std::vector<std::uint16_t>> tables;   // [k-1] for k = 1..rounds-1

    // Initial bank value of a fresh cycle.
    double initial_bank() const noexcept;

    std::size_t table_index(int round, std::size_t snr_idx, std::size_t bank_idx) const;

    // Nearest-node lookup in both coordinates (ties toward the lower node);
    // SNR beyond the last node uses the last node. A bank outside the
    // declared range is clamped and, when a counter is supplied, counted.
    std::size_t lookup_index(int round, double snr, double bank,
                             std::uint64_t* clamp_count = nullptr) const;
    double lookup(int round, double snr, double bank,
                  std::uint64_t* clamp_count = nullptr) const;

    void validate() const;

    // Structured-text round trip; loading a saved policy reproduces it
    // exactly, grid vectors included.
    void save(std::ostream& out) const;
    static Policy load(std::istream& in);
};

// Index of the node nearest to x (ties toward the lower index); values
// outside the span map to the end nodes. Nodes must be sorted ascending.
std::size_t nearest_node(const std::vector<double>& nodes, double x);

}  // namespace lharq
