#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lharq {

// Threshold-exponential packet error rate curve: PER = 1 below the SNR
// threshold 2^rate - 1, exp(-decay * (snr/threshold - 1)) above it. decay may
// be +infinity, which degenerates to the ideal step decoder.
struct ExponentialPer {
    double rate = 0.0;
    double decay = 0.0;
    double snr_threshold = 0.0;

    static ExponentialPer make(double rate, double decay);

    // PER of a message at the nominal rate.
    double full(double snr) const;

    // PER of a message at a reduced effective rate; rate 0 always decodes.
    double at_rate(double snr, double effective_rate) const;
};

// Measured decoder curves, one series per backtrack rate. The rho = 0 series
// is the plain decoding PER; rho > 0 series are the joint probabilities of a
// decoding error and a backtrack error at that rate. Interpolation is linear
// in (snr_db, log10 prob) within a series (probabilities floored at 1e-12
// before taking logs, exact at the nodes) and linear in rho across series.
// Outside the tabulated snr_db range the curve is 1 below and 0 above. A rho
// query above the highest series interpolates toward 0 at rho = rate, the
// zero-rate limit of the backtrack message.
class PerTable {
  public:
    struct Series {
        double rho = 0.0;
        std::vector<double> snr_db;
        std::vector<double> prob;
        std::vector<double> log_prob;  // log10 of floored prob
    };

    PerTable(double rate, std::vector<Series> series);

    double rate() const noexcept { return rate_; }
    const std::vector<Series>& series() const noexcept { return series_; }

    double full(double snr) const;
    double joint(double snr, double rho) const;

    // Largest SNR at which the full-decoding PER still reaches eps.
    double truncation_for(double eps) const;

  private:
    double eval_series(const Series& s, double snr_db) const;

    double rate_;
    std::vector<Series> series_;  // rho ascending, series_[0].rho == 0
};

struct TableLoadStats {
    std::size_t n_rows = 0;
    std::size_t n_clamped = 0;
};

// Parses the CSV table format: header `snr_db,rho,prob`, `#` comments, and an
// optional `# rate_R=<value>` metadata line consulted when rate_override is
// absent. Joint rows exceeding the interpolated marginal are clamped down and
// counted. Throws std::runtime_error naming the offending line on malformed
// input, a missing rho = 0 series, or non-monotone snr_db within a series.
std::pair<PerTable, TableLoadStats> load_per_table(std::istream& in,
                                                   std::optional<double> rate_override = {});

// Unified query surface over the synthetic and tabulated curves. Immutable;
// copies share the underlying table. An optional truncation clamps both
// probabilities to zero above the SNR where the full-decoding PER falls to
// eps.
class PerModel {
  public:
    static PerModel synthetic(double rate, double decay);
    static PerModel tabulated(PerTable table);

    PerModel truncated(double eps) const;

    double rate() const noexcept;
    bool is_synthetic() const noexcept;
    const ExponentialPer* synthetic_curve() const noexcept;  // null when tabulated
    const PerTable* table() const noexcept;                  // null when synthetic

    double truncation_eps() const noexcept;  // 0 when untruncated
    double truncation_snr() const noexcept;  // +inf when untruncated

    // Pr{decoding error | snr}.
    double full(double snr) const;

    // Pr{backtrack error} == Pr{decoding error and backtrack error}, for a
    // backtrack rate in [0, rate]. Never exceeds full(snr).
    double backtrack(double snr, double backtrack_rate) const;

    // Pr{backtrack error | decoding error}, in [0, 1]; defined as 0 where
    // full(snr) == 0.
    double backtrack_cond(double snr, double backtrack_rate) const;

  private:
    struct Impl;
    explicit PerModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

}  // namespace lharq
