#include "lharq/per_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lharq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogFloor = 1e-12;

double to_db(double snr_linear) {
    if (snr_linear <= 0.0) return -kInf;
    return 10.0 * std::log10(snr_linear);
}

double from_db(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

}  // namespace

ExponentialPer ExponentialPer::make(double rate, double decay) {
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw std::invalid_argument("ExponentialPer: rate must be positive and finite");
    if (!(decay > 0.0)) throw std::invalid_argument("ExponentialPer: decay must be positive");
    return ExponentialPer{rate, decay, std::exp2(rate) - 1.0};
}

double ExponentialPer::full(double snr) const { return at_rate(snr, rate); }

double ExponentialPer::at_rate(double snr, double effective_rate) const {
    if (effective_rate <= 0.0) return 0.0;
    const double threshold = std::exp2(effective_rate) - 1.0;
    const double excess = snr / threshold - 1.0;
    if (excess <= 0.0) return 1.0;
    return std::exp(-decay * excess);  // decay = inf gives the step decoder
}

PerTable::PerTable(double rate, std::vector<Series> series)
    : rate_(rate), series_(std::move(series)) {
    if (!(rate_ > 0.0)) throw std::invalid_argument("PerTable: rate must be positive");
    if (series_.empty() || series_[0].rho != 0.0)
        throw std::invalid_argument("PerTable: rho = 0 series required");
    for (auto& s : series_) {
        if (s.snr_db.size() != s.prob.size() || s.snr_db.empty())
            throw std::invalid_argument("PerTable: malformed series");
        s.log_prob.resize(s.prob.size());
        for (std::size_t i = 0; i < s.prob.size(); ++i)
            s.log_prob[i] = std::log10(std::max(s.prob[i], kLogFloor));
    }
}

double PerTable::eval_series(const Series& s, double snr_db) const {
    if (snr_db < s.snr_db.front()) return 1.0;
    if (snr_db > s.snr_db.back()) return 0.0;
    const auto it = std::lower_bound(s.snr_db.begin(), s.snr_db.end(), snr_db);
    const std::size_t hi = static_cast<std::size_t>(it - s.snr_db.begin());
    if (hi < s.snr_db.size() && s.snr_db[hi] == snr_db) return s.prob[hi];  // exact node
    const std::size_t lo = hi - 1;
    const double t = (snr_db - s.snr_db[lo]) / (s.snr_db[hi] - s.snr_db[lo]);
    const double lp = s.log_prob[lo] + t * (s.log_prob[hi] - s.log_prob[lo]);
    return std::pow(10.0, lp);
}

double PerTable::full(double snr) const { return eval_series(series_[0], to_db(snr)); }

double PerTable::joint(double snr, double rho) const {
    const double snr_db = to_db(snr);
    // Bracket rho between adjacent series; above the top series interpolate
    // toward probability 0 at rho = rate.
    std::size_t hi = 0;
    while (hi < series_.size() && series_[hi].rho < rho) ++hi;
    if (hi < series_.size() && series_[hi].rho == rho) return eval_series(series_[hi], snr_db);
    if (hi == series_.size()) {
        const Series& last = series_.back();
        if (rate_ == last.rho) return eval_series(last, snr_db);
        const double t = (rho - last.rho) / (rate_ - last.rho);
        return (1.0 - t) * eval_series(last, snr_db);
    }
    const Series& a = series_[hi - 1];
    const Series& b = series_[hi];
    const double t = (rho - a.rho) / (b.rho - a.rho);
    return (1.0 - t) * eval_series(a, snr_db) + t * eval_series(b, snr_db);
}

double PerTable::truncation_for(double eps) const {
    const Series& s = series_[0];
    if (s.prob.back() >= eps) return from_db(s.snr_db.back());
    std::size_t i = s.prob.size() - 1;
    while (i > 0 && s.prob[i - 1] < eps) --i;
    if (i == 0) return from_db(s.snr_db.front());
    // Log-linear crossing inside [i-1, i].
    const double le = std::log10(std::max(eps, kLogFloor));
    const double l0 = s.log_prob[i - 1];
    const double l1 = s.log_prob[i];
    const double t = (l1 == l0) ? 1.0 : (le - l0) / (l1 - l0);
    return from_db(s.snr_db[i - 1] + t * (s.snr_db[i] - s.snr_db[i - 1]));
}

namespace {

struct RawRow {
    std::size_t line = 0;
    double snr_db = 0.0;
    double rho = 0.0;
    double prob = 0.0;
};

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    throw std::runtime_error("per table line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::pair<PerTable, TableLoadStats> load_per_table(std::istream& in,
                                                   std::optional<double> rate_override) {
    std::optional<double> sidecar_rate;
    std::vector<RawRow> rows;
    bool saw_header = false;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
        if (!trimmed.empty() && trimmed.back() == '\r') trimmed.pop_back();
        if (trimmed.empty()) continue;
        if (trimmed[0] == '#') {
            const std::string key = "rate_R=";
            const auto pos = trimmed.find(key);
            if (pos != std::string::npos) {
                try {
                    sidecar_rate = std::stod(trimmed.substr(pos + key.size()));
                } catch (const std::exception&) {
                    parse_fail(line_no, "bad rate_R metadata");
                }
            }
            continue;
        }
        if (!saw_header) {
            std::string compact;
            for (char c : trimmed)
                if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
            if (compact != "snr_db,rho,prob")
                parse_fail(line_no, "expected header 'snr_db,rho,prob'");
            saw_header = true;
            continue;
        }
        RawRow row;
        row.line = line_no;
        std::replace(trimmed.begin(), trimmed.end(), ',', ' ');
        std::istringstream fields(trimmed);
        if (!(fields >> row.snr_db >> row.rho >> row.prob)) parse_fail(line_no, "malformed row");
        std::string extra;
        if (fields >> extra) parse_fail(line_no, "trailing fields");
        if (!(row.prob >= 0.0 && row.prob <= 1.0)) parse_fail(line_no, "prob outside [0, 1]");
        if (row.rho < 0.0) parse_fail(line_no, "negative rho");
        rows.push_back(row);
    }
    if (!saw_header) parse_fail(line_no, "missing header");
    if (rows.empty()) parse_fail(line_no, "no data rows");

    const double rate = rate_override ? *rate_override : sidecar_rate.value_or(0.0);
    if (!(rate > 0.0))
        throw std::runtime_error("per table: rate_R not supplied (flag or '# rate_R=' line)");

    std::map<double, PerTable::Series> by_rho;
    for (const RawRow& row : rows) {
        if (row.rho > rate) parse_fail(row.line, "rho exceeds rate_R");
        auto& s = by_rho[row.rho];
        s.rho = row.rho;
        if (!s.snr_db.empty() && row.snr_db <= s.snr_db.back())
            parse_fail(row.line, "snr_db not strictly increasing within rho series");
        s.snr_db.push_back(row.snr_db);
        s.prob.push_back(row.prob);
    }
    if (by_rho.find(0.0) == by_rho.end())
        throw std::runtime_error("per table: missing rho=0 series");

    std::vector<PerTable::Series> series;
    series.reserve(by_rho.size());
    for (auto& [rho, s] : by_rho) series.push_back(std::move(s));

    // Enforce joint <= marginal against the interpolated rho = 0 series.
    PerTable marginal_only(rate, {series[0]});
    TableLoadStats stats;
    stats.n_rows = rows.size();
    for (std::size_t k = 1; k < series.size(); ++k) {
        auto& s = series[k];
        for (std::size_t i = 0; i < s.prob.size(); ++i) {
            const double cap = marginal_only.full(from_db(s.snr_db[i]));
            if (s.prob[i] > cap) {
                s.prob[i] = cap;
                ++stats.n_clamped;
            }
        }
    }

    return {PerTable(rate, std::move(series)), stats};
}

struct PerModel::Impl {
    bool synthetic = false;
    ExponentialPer curve;
    std::shared_ptr<const PerTable> table;
    double trunc_eps = 0.0;
    double trunc_snr = kInf;

    double raw_full(double snr) const {
        return synthetic ? curve.full(snr) : table->full(snr);
    }
    double raw_backtrack(double snr, double rho) const {
        if (synthetic) return curve.at_rate(snr, curve.rate - rho);
        // Query-time clamp: the two interpolations run on independent grids,
        // so dominance is re-enforced here.
        return std::min(table->joint(snr, rho), table->full(snr));
    }
};

PerModel PerModel::synthetic(double rate, double decay) {
    auto impl = std::make_shared<Impl>();
    impl->synthetic = true;
    impl->curve = ExponentialPer::make(rate, decay);
    return PerModel(std::move(impl));
}

PerModel PerModel::tabulated(PerTable table) {
    auto impl = std::make_shared<Impl>();
    impl->synthetic = false;
    impl->table = std::make_shared<const PerTable>(std::move(table));
    return PerModel(std::move(impl));
}

PerModel PerModel::truncated(double eps) const {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::invalid_argument("PerModel::truncated: eps must be in (0, 1)");
    auto impl = std::make_shared<Impl>(*impl_);
    impl->trunc_eps = eps;
    if (impl->synthetic) {
        const auto& c = impl->curve;
        impl->trunc_snr = std::isinf(c.decay) ? c.snr_threshold
                                              : c.snr_threshold * (1.0 - std::log(eps) / c.decay);
    } else {
        impl->trunc_snr = impl->table->truncation_for(eps);
    }
    return PerModel(std::move(impl));
}

double PerModel::rate() const noexcept {
    return impl_->synthetic ? impl_->curve.rate : impl_->table->rate();
}

bool PerModel::is_synthetic() const noexcept { return impl_->synthetic; }

const ExponentialPer* PerModel::synthetic_curve() const noexcept {
    return impl_->synthetic ? &impl_->curve : nullptr;
}

const PerTable* PerModel::table() const noexcept {
    return impl_->synthetic ? nullptr : impl_->table.get();
}

double PerModel::truncation_eps() const noexcept { return impl_->trunc_eps; }

double PerModel::truncation_snr() const noexcept { return impl_->trunc_snr; }

double PerModel::full(double snr) const {
    if (snr < 0.0) throw std::domain_error("per_full: snr must be >= 0");
    if (snr > impl_->trunc_snr) return 0.0;
    return impl_->raw_full(snr);
}

double PerModel::backtrack(double snr, double backtrack_rate) const {
    if (snr < 0.0) throw std::domain_error("per_backtrack: snr must be >= 0");
    if (backtrack_rate < 0.0 || backtrack_rate > rate())
        throw std::domain_error("per_backtrack: backtrack rate outside [0, rate]");
    if (snr > impl_->trunc_snr) return 0.0;
    return impl_->raw_backtrack(snr, backtrack_rate);
}

double PerModel::backtrack_cond(double snr, double backtrack_rate) const {
    const double f = full(snr);
    if (f <= 0.0) return 0.0;  // no decoding error occurred
    const double c = backtrack(snr, backtrack_rate) / f;
    return std::min(std::max(c, 0.0), 1.0);
}

}  // namespace lharq
