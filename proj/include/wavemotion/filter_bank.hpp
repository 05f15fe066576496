#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wavemotion/types.hpp"

namespace wavemotion {

/// An orthonormal two-channel analysis bank. Invariants (checked by
/// `validate_filter_bank`): unit energy in each filter, zero DC in the
/// high-pass, and mutual orthogonality.
struct FilterBank {
    std::string name;
    std::vector<double> low;
    std::vector<double> high;
};

/// Builds the quadrature-mirror high-pass from a low-pass:
/// high[k] = (-1)^k * low[L-1-k].
inline std::vector<double> qmf_highpass(const std::vector<double>& low) {
    const std::size_t n = low.size();
    std::vector<double> high(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        high[k] = sign * low[n - 1 - k];
    }
    return high;
}

inline void validate_filter_bank(const FilterBank& bank, double tol = 1e-12) {
    if (bank.low.size() < 2 || bank.high.size() != bank.low.size())
        throw ConfigError("filter bank '" + bank.name +
                          "': low/high must have equal length >= 2");
    double e_low = 0.0, e_high = 0.0, dc_high = 0.0, cross = 0.0;
    for (std::size_t i = 0; i < bank.low.size(); ++i) {
        e_low += bank.low[i] * bank.low[i];
        e_high += bank.high[i] * bank.high[i];
        dc_high += bank.high[i];
        cross += bank.low[i] * bank.high[i];
    }
    if (std::abs(e_low - 1.0) > tol || std::abs(e_high - 1.0) > tol)
        throw ConfigError("filter bank '" + bank.name + "': filters are not unit-energy");
    if (std::abs(dc_high) > tol)
        throw ConfigError("filter bank '" + bank.name + "': high-pass has nonzero DC");
    if (std::abs(cross) > tol)
        throw ConfigError("filter bank '" + bank.name + "': low and high are not orthogonal");
}

inline const FilterBank& haar_bank() {
    static const FilterBank bank = [] {
        const double s = 1.0 / std::sqrt(2.0);
        FilterBank b{"haar", {s, s}, {s, -s}};
        return b;
    }();
    return bank;
}

/// Daubechies-2 taps from the closed form in sqrt(3).
inline const FilterBank& db2_bank() {
    static const FilterBank bank = [] {
        const double r3 = std::sqrt(3.0);
        const double c = 1.0 / (4.0 * std::sqrt(2.0));
        FilterBank b;
        b.name = "db2";
        b.low = {c * (1.0 + r3), c * (3.0 + r3), c * (3.0 - r3), c * (1.0 - r3)};
        b.high = qmf_highpass(b.low);
        return b;
    }();
    return bank;
}

/// Coiflet-1 taps from the closed form in sqrt(7).
inline const FilterBank& coif1_bank() {
    static const FilterBank bank = [] {
        const double r7 = std::sqrt(7.0);
        const double c = std::sqrt(2.0) / 32.0;
        FilterBank b;
        b.name = "coif1";
        b.low = {c * (1.0 - r7), c * (5.0 + r7),  c * (14.0 + 2.0 * r7),
                 c * (14.0 - 2.0 * r7), c * (1.0 - r7), c * (-3.0 + r7)};
        b.high = qmf_highpass(b.low);
        return b;
    }();
    return bank;
}

inline std::optional<FilterBank> builtin_filter_bank(const std::string& name) {
    if (name == "haar") return haar_bank();
    if (name == "db2") return db2_bank();
    if (name == "coif1") return coif1_bank();
    return std::nullopt;
}

/// Resolves a bank by built-in name, or builds one from custom taps
/// (high-pass derived by QMF when not given). Always validated.
inline FilterBank make_filter_bank(const std::string& name,
                                   const std::vector<double>& custom_low = {},
                                   const std::vector<double>& custom_high = {}) {
    if (custom_low.empty()) {
        if (auto b = builtin_filter_bank(name)) return *b;
        throw ConfigError("unknown filter bank '" + name +
                          "' (built-ins: haar, db2, coif1; or supply taps)");
    }
    FilterBank bank;
    bank.name = name;
    bank.low = custom_low;
    bank.high = custom_high.empty() ? qmf_highpass(custom_low) : custom_high;
    validate_filter_bank(bank);
    return bank;
}

}  // namespace wavemotion
