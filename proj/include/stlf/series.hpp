#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stlf/error.hpp"
#include "stlf/timestamp.hpp"

namespace stlf {

namespace detail {

inline std::vector<Timestamp> hourly_grid(Timestamp start, std::size_t n) {
    std::vector<Timestamp> ts(n);
    for (std::size_t i = 0; i < n; ++i) ts[i] = start + std::chrono::hours{static_cast<long>(i)};
    return ts;
}

}  // namespace detail

/// Hourly load levels S(t). Immutable once constructed.
///
/// Invariants: timestamps strictly increasing, values strictly positive,
/// equal lengths, at least two points.
class LoadSeries {
public:
    LoadSeries(std::vector<Timestamp> timestamps, std::vector<double> values)
        : timestamps_(std::move(timestamps)), values_(std::move(values)) {
        if (timestamps_.size() != values_.size())
            throw DataError("load series: " + std::to_string(timestamps_.size()) +
                            " timestamps but " + std::to_string(values_.size()) + " values");
        if (values_.size() < 2) throw DataError("load series needs at least 2 observations");
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!(values_[i] > 0.0) || !std::isfinite(values_[i]))
                throw DataError("non-positive load level at index " + std::to_string(i));
            if (i > 0 && timestamps_[i] <= timestamps_[i - 1])
                throw DataError("timestamps not strictly increasing at index " + std::to_string(i));
        }
    }

    /// Values on a synthetic hourly grid starting at the Unix epoch.
    explicit LoadSeries(const std::vector<double>& values)
        : LoadSeries(detail::hourly_grid(Timestamp{}, values.size()), values) {}

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<const Timestamp> timestamps() const noexcept { return timestamps_; }
    double front() const noexcept { return values_.front(); }
    double back() const noexcept { return values_.back(); }

private:
    std::vector<Timestamp> timestamps_;
    std::vector<double> values_;
};

/// Log-returns r[i] = ln(S[i+1]/S[i]) plus the level (and its timestamp)
/// preceding the first return, so levels can be rebuilt.
class ReturnSeries {
public:
    ReturnSeries(std::vector<Timestamp> timestamps, std::vector<double> values, double origin_level,
                 Timestamp origin_timestamp)
        : timestamps_(std::move(timestamps)),
          values_(std::move(values)),
          origin_level_(origin_level),
          origin_timestamp_(origin_timestamp) {
        if (timestamps_.size() != values_.size())
            throw DataError("return series: timestamp/value length mismatch");
        if (values_.empty()) throw DataError("return series is empty");
        if (!(origin_level_ > 0.0) || !std::isfinite(origin_level_))
            throw DataError("return series: origin level must be positive");
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i]))
                throw DataError("non-finite return at index " + std::to_string(i));
            Timestamp prev = i == 0 ? origin_timestamp_ : timestamps_[i - 1];
            if (timestamps_[i] <= prev)
                throw DataError("timestamps not strictly increasing at index " + std::to_string(i));
        }
    }

    ReturnSeries(const std::vector<double>& values, double origin_level)
        : ReturnSeries(detail::hourly_grid(Timestamp{std::chrono::hours{1}}, values.size()), values,
                       origin_level, Timestamp{}) {}

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<const Timestamp> timestamps() const noexcept { return timestamps_; }
    double origin_level() const noexcept { return origin_level_; }
    Timestamp origin_timestamp() const noexcept { return origin_timestamp_; }

private:
    std::vector<Timestamp> timestamps_;
    std::vector<double> values_;
    double origin_level_;
    Timestamp origin_timestamp_;
};

inline ReturnSeries log_returns(const LoadSeries& series) {
    auto s = series.values();
    auto ts = series.timestamps();
    std::vector<double> r(s.size() - 1);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) r[i] = std::log(s[i + 1] / s[i]);
    return ReturnSeries({ts.begin() + 1, ts.end()}, std::move(r), s[0], ts[0]);
}

/// Inverse of log_returns: S[0] = origin, S[i+1] = S[i] * exp(r[i]).
inline LoadSeries reconstruct_levels(const ReturnSeries& returns) {
    auto r = returns.values();
    std::vector<double> s(r.size() + 1);
    std::vector<Timestamp> ts;
    ts.reserve(r.size() + 1);
    ts.push_back(returns.origin_timestamp());
    ts.insert(ts.end(), returns.timestamps().begin(), returns.timestamps().end());
    s[0] = returns.origin_level();
    for (std::size_t i = 0; i < r.size(); ++i) s[i + 1] = s[i] * std::exp(r[i]);
    return LoadSeries(std::move(ts), std::move(s));
}

/// Contiguous train/holdout split. The holdout part starts from the last
/// training level so both halves reconstruct to the original levels.
inline std::pair<ReturnSeries, ReturnSeries> split(const ReturnSeries& series, std::size_t holdout) {
    const std::size_t n = series.size();
    if (holdout == 0 || holdout >= n)
        throw DataError("holdout " + std::to_string(holdout) + " out of range for " +
                        std::to_string(n) + " returns");
    const std::size_t cut = n - holdout;
    auto r = series.values();
    auto ts = series.timestamps();

    double level = series.origin_level();
    for (std::size_t i = 0; i < cut; ++i) level *= std::exp(r[i]);

    ReturnSeries train({ts.begin(), ts.begin() + cut}, {r.begin(), r.begin() + cut},
                       series.origin_level(), series.origin_timestamp());
    ReturnSeries test({ts.begin() + cut, ts.end()}, {r.begin() + cut, r.end()}, level, ts[cut - 1]);
    return {std::move(train), std::move(test)};
}

}  // namespace stlf
