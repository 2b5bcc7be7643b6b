// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plansim Authors

#pragma once

#include <plansim/error.hpp>
#include <plansim/textsim.hpp>

#include <string_view>
#include <vector>

namespace plansim::reference {

inline constexpr std::size_t kBruteforceMaxLength = 16;

/// Direct transcription of the Jaro matching rule, used only to cross-check
/// plansim::match_stats. Shares no helpers with the bit-parallel matcher.
inline MatchStats match_stats_bruteforce(std::string_view s1, std::string_view s2) {
    if (s1.size() > kBruteforceMaxLength || s2.size() > kBruteforceMaxLength) {
        throw Error("match_stats_bruteforce: inputs longer than 16 characters");
    }
    const long n1 = static_cast<long>(s1.size());
    const long n2 = static_cast<long>(s2.size());
    long window = (n1 > n2 ? n1 : n2) / 2 - 1;
    if (window < 0) {
        window = 0;
    }

    std::vector<bool> used1(s1.size(), false);
    std::vector<bool> used2(s2.size(), false);
    std::size_t m = 0;
    for (long i = 0; i < n1; ++i) {
        for (long j = 0; j < n2; ++j) {
            const long distance = i > j ? i - j : j - i;
            if (distance <= window && !used2[j] && s1[i] == s2[j]) {
                used1[i] = true;
                used2[j] = true;
                ++m;
                break;
            }
        }
    }

    std::vector<char> seq1;
    std::vector<char> seq2;
    for (long i = 0; i < n1; ++i) {
        if (used1[i]) {
            seq1.push_back(s1[i]);
        }
    }
    for (long j = 0; j < n2; ++j) {
        if (used2[j]) {
            seq2.push_back(s2[j]);
        }
    }
    std::size_t mismatched = 0;
    for (std::size_t k = 0; k < seq1.size(); ++k) {
        if (seq1[k] != seq2[k]) {
            ++mismatched;
        }
    }
    return MatchStats{m, mismatched, s1.size(), s2.size()};
}

} // namespace plansim::reference
