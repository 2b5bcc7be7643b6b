// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plansim Authors

#pragma once

#include <plansim/corpus.hpp>
#include <plansim/error.hpp>
#include <plansim/matrix.hpp>
#include <plansim/unicode.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

namespace plansim {

/// Inputs of the Jaro formula for one string pair.
///
/// `out_of_order` is the number of positions where the k-th matched character
/// of s1 differs from the k-th matched character of s2, i.e. twice the
/// transposition count. Keeping it integral avoids half-unit rounding.
struct MatchStats {
    std::size_t matches = 0;
    std::size_t out_of_order = 0;
    std::size_t len1 = 0;
    std::size_t len2 = 0;

    double transpositions() const noexcept { return static_cast<double>(out_of_order) / 2.0; }

    friend bool operator==(const MatchStats&, const MatchStats&) = default;
};

struct JaroWinklerParams {
    double prefix_scale = 0.1;
    std::size_t max_prefix = 4;

    void validate() const {
        if (!(prefix_scale >= 0.0 && prefix_scale <= 0.25)) {
            throw Error("prefix scale must lie in [0, 0.25]");
        }
        if (prefix_scale * static_cast<double>(max_prefix) > 1.0) {
            throw Error("prefix scale times max prefix must not exceed 1");
        }
    }
};

enum class AggregationKind { mean_of_best, top_k_mean };

struct AggregationPolicy {
    AggregationKind kind = AggregationKind::mean_of_best;
    std::size_t k = 5;

    void validate() const {
        if (k < 1) {
            throw Error("aggregation k must be at least 1");
        }
    }
};

inline const char* to_string(AggregationKind kind) noexcept {
    return kind == AggregationKind::mean_of_best ? "mean-of-best" : "top-k-mean";
}

namespace detail {

template <typename CharT>
constexpr std::uint32_t char_key(CharT c) noexcept {
    return static_cast<std::uint32_t>(static_cast<std::make_unsigned_t<CharT>>(c));
}

constexpr std::size_t block_count(std::size_t length) noexcept { return (length + 63) / 64; }

/// Zero-initialized buffer with inline storage for small sizes.
template <typename T, std::size_t Inline>
class SmallBuffer {
public:
    explicit SmallBuffer(std::size_t n) : size_(n) {
        if (n > inline_.size()) {
            heap_.assign(n, T{});
        }
    }
    T* data() noexcept { return heap_.empty() ? inline_.data() : heap_.data(); }
    T& operator[](std::size_t i) noexcept { return data()[i]; }
    std::size_t size() const noexcept { return size_; }

private:
    std::array<T, Inline> inline_{};
    std::vector<T> heap_;
    std::size_t size_;
};

/// Bit vector, inline up to 512 bits.
using BitBuffer = SmallBuffer<std::uint64_t, 8>;

} // namespace detail

/// Per-character position bitmaps of one string: bit j of the bitmap for c is
/// set when s[j] == c. Built once per string and reused across comparisons.
class MatchPattern {
public:
    MatchPattern() = default;

    template <typename CharT>
    explicit MatchPattern(std::basic_string_view<CharT> s)
        : length_(s.size()), blocks_(detail::block_count(s.size())) {
        for (std::size_t j = 0; j < s.size(); ++j) {
            const std::size_t slot = slot_for_insert(detail::char_key(s[j]));
            bits_[slot * blocks_ + (j >> 6)] |= std::uint64_t{1} << (j & 63);
        }
    }

    std::size_t size() const noexcept { return length_; }
    std::size_t blocks() const noexcept { return blocks_; }

    /// Bitmap blocks for `key`, or nullptr when the character does not occur.
    const std::uint64_t* find(std::uint32_t key) const noexcept {
        if (key < ascii_slot_.size()) {
            const std::uint16_t slot = ascii_slot_[key];
            return slot == 0 ? nullptr : bits_.data() + (slot - 1) * blocks_;
        }
        auto it = std::lower_bound(wide_slot_.begin(), wide_slot_.end(), key,
                                   [](const auto& entry, std::uint32_t k) { return entry.first < k; });
        if (it == wide_slot_.end() || it->first != key) {
            return nullptr;
        }
        return bits_.data() + it->second * blocks_;
    }

private:
    std::size_t slot_for_insert(std::uint32_t key) {
        if (key < ascii_slot_.size()) {
            if (ascii_slot_[key] == 0) {
                ascii_slot_[key] = static_cast<std::uint16_t>(new_slot() + 1);
            }
            return ascii_slot_[key] - 1u;
        }
        auto it = std::lower_bound(wide_slot_.begin(), wide_slot_.end(), key,
                                   [](const auto& entry, std::uint32_t k) { return entry.first < k; });
        if (it == wide_slot_.end() || it->first != key) {
            it = wide_slot_.insert(it, {key, new_slot()});
        }
        return it->second;
    }

    std::size_t new_slot() {
        const std::size_t slot = bits_.size() / std::max<std::size_t>(blocks_, 1);
        bits_.resize(bits_.size() + blocks_, 0);
        return slot;
    }

    std::size_t length_ = 0;
    std::size_t blocks_ = 0;
    std::array<std::uint16_t, 256> ascii_slot_{};
    std::vector<std::pair<std::uint32_t, std::size_t>> wide_slot_;
    std::vector<std::uint64_t> bits_;
};

/// Matching window: characters match only within this index distance.
constexpr std::size_t match_window(std::size_t len1, std::size_t len2) noexcept {
    const std::size_t half = std::max(len1, len2) / 2;
    return half > 0 ? half - 1 : 0;
}

/// Greedy Jaro matching of s1 against the precomputed pattern of s2. Each
/// s1[i] takes the smallest unconsumed equal s2[j] with |i - j| <= window.
template <typename C1, typename C2>
MatchStats match_stats(std::basic_string_view<C1> s1, std::basic_string_view<C2> s2,
                       const MatchPattern& pattern2) {
    MatchStats stats{0, 0, s1.size(), s2.size()};
    const std::size_t len1 = s1.size();
    const std::size_t len2 = s2.size();
    if (len1 == 0 || len2 == 0) {
        return stats;
    }

    const std::size_t window = match_window(len1, len2);
    detail::BitBuffer flag2(pattern2.blocks());
    // Matched characters of s1, in s1 order.
    detail::SmallBuffer<std::uint32_t, 256> matched1(std::min(len1, len2));

    const std::size_t reach = std::min(len1, window + len2);
    for (std::size_t i = 0; i < reach; ++i) {
        const std::uint32_t key = detail::char_key(s1[i]);
        const std::uint64_t* positions = pattern2.find(key);
        if (positions == nullptr) {
            continue;
        }
        const std::size_t lo = i > window ? i - window : 0;
        const std::size_t hi = std::min(i + window, len2 - 1);
        const std::size_t first_block = lo >> 6;
        const std::size_t last_block = hi >> 6;
        for (std::size_t b = first_block; b <= last_block; ++b) {
            std::uint64_t mask = ~std::uint64_t{0};
            if (b == first_block) {
                mask &= ~std::uint64_t{0} << (lo & 63);
            }
            if (b == last_block) {
                mask &= ~std::uint64_t{0} >> (63 - (hi & 63));
            }
            const std::uint64_t candidates = positions[b] & ~flag2[b] & mask;
            if (candidates != 0) {
                flag2[b] |= candidates & (~candidates + 1);
                matched1[stats.matches++] = key;
                break;
            }
        }
    }

    // Walk the s2 matches in order and count disagreements with s1's.
    std::size_t k = 0;
    for (std::size_t b = 0; k < stats.matches; ++b) {
        for (std::uint64_t word = flag2[b]; word != 0; word &= word - 1) {
            const std::size_t j = b * 64 + static_cast<std::size_t>(std::countr_zero(word));
            stats.out_of_order += detail::char_key(s2[j]) != matched1[k++];
        }
    }
    return stats;
}

template <typename CharT>
MatchStats match_stats(std::basic_string_view<CharT> s1, std::basic_string_view<CharT> s2) {
    return match_stats(s1, s2, MatchPattern(s2));
}

/// Byte-wise comparison; pass std::u32string_view to compare code points.
inline MatchStats match_stats(std::string_view s1, std::string_view s2) {
    return match_stats<char>(s1, s2);
}

inline MatchStats match_stats(std::u32string_view s1, std::u32string_view s2) {
    return match_stats<char32_t>(s1, s2);
}

/// Jaro similarity from its inputs. Both-empty scores 1, one-empty or no
/// matches score 0.
inline double jaro_from_stats(const MatchStats& s) noexcept {
    if (s.len1 == 0 && s.len2 == 0) {
        return 1.0;
    }
    if (s.matches == 0) {
        return 0.0;
    }
    const double m = static_cast<double>(s.matches);
    const double ordered = (2.0 * m - static_cast<double>(s.out_of_order)) / (2.0 * m);
    const double sim = (m / static_cast<double>(s.len1) + m / static_cast<double>(s.len2) + ordered) / 3.0;
    return std::min(sim, 1.0);
}

template <typename C1, typename C2>
std::size_t common_prefix(std::basic_string_view<C1> s1, std::basic_string_view<C2> s2,
                          std::size_t cap) noexcept {
    const std::size_t limit = std::min({s1.size(), s2.size(), cap});
    std::size_t n = 0;
    while (n < limit && detail::char_key(s1[n]) == detail::char_key(s2[n])) {
        ++n;
    }
    return n;
}

/// Winkler prefix boost applied to a Jaro score; `prefix` is already capped.
inline double winkler_boost(double jaro_sim, std::size_t prefix, double prefix_scale) noexcept {
    const double boosted = jaro_sim + static_cast<double>(prefix) * prefix_scale * (1.0 - jaro_sim);
    return std::min(boosted, 1.0);
}

/// Largest Jaro-Winkler score any pair of strings with these lengths can reach.
inline double jaro_winkler_upper_bound(std::size_t len1, std::size_t len2, const JaroWinklerParams& params) noexcept {
    const std::size_t shorter = std::min(len1, len2);
    const double sim = jaro_from_stats({shorter, 0, len1, len2});
    return winkler_boost(sim, std::min(params.max_prefix, shorter), params.prefix_scale);
}

template <typename CharT>
double jaro(std::basic_string_view<CharT> s1, std::basic_string_view<CharT> s2) {
    return jaro_from_stats(match_stats(s1, s2));
}

inline double jaro(std::string_view s1, std::string_view s2) { return jaro<char>(s1, s2); }
inline double jaro(std::u32string_view s1, std::u32string_view s2) { return jaro<char32_t>(s1, s2); }

template <typename CharT>
double jaro_winkler(std::basic_string_view<CharT> s1, std::basic_string_view<CharT> s2,
                    const JaroWinklerParams& params = {}) {
    const double sim = jaro(s1, s2);
    return winkler_boost(sim, common_prefix(s1, s2, params.max_prefix), params.prefix_scale);
}

inline double jaro_winkler(std::string_view s1, std::string_view s2, const JaroWinklerParams& params = {}) {
    return jaro_winkler<char>(s1, s2, params);
}

inline double jaro_winkler(std::u32string_view s1, std::u32string_view s2,
                           const JaroWinklerParams& params = {}) {
    return jaro_winkler<char32_t>(s1, s2, params);
}

/// Decodes both UTF-8 strings and compares code points.
inline double utf8_jaro_winkler(std::string_view s1, std::string_view s2, const JaroWinklerParams& params = {}) {
    return jaro_winkler(unicode::decode_utf8(s1), unicode::decode_utf8(s2), params);
}

/// A decoded string together with its match pattern.
struct PreparedText {
    std::u32string chars;
    MatchPattern pattern;

    PreparedText() = default;
    explicit PreparedText(std::string_view utf8)
        : chars(unicode::decode_utf8(utf8)), pattern(std::u32string_view(chars)) {}

    std::u32string_view view() const noexcept { return chars; }
};

/// Jaro-Winkler of `a` against a prepared `b`; equal to jaro_winkler(a, b).
inline double jaro_winkler(std::u32string_view a, const PreparedText& b, const JaroWinklerParams& params) {
    const double sim = jaro_from_stats(match_stats(a, b.view(), b.pattern));
    return winkler_boost(sim, common_prefix(a, b.view(), params.max_prefix), params.prefix_scale);
}

struct PreparedDocument {
    std::string id;
    std::vector<PreparedText> sentences;
};

inline PreparedDocument prepare(const Document& doc) {
    PreparedDocument out{doc.id, {}};
    out.sentences.reserve(doc.sentences.size());
    for (const auto& s : doc.sentences) {
        out.sentences.emplace_back(s.text);
    }
    return out;
}

/// Best Jaro-Winkler score of `query` over `targets`.
inline double sentence_best_score(const NormalizedSentence& query, std::span<const NormalizedSentence> targets,
                                  const JaroWinklerParams& params = {}) {
    if (targets.empty()) {
        throw Error("sentence_best_score: target list is empty");
    }
    const PreparedText prepared(query.text);
    double best = 0.0;
    for (const auto& target : targets) {
        // Jaro-Winkler is symmetric, so the query pattern can serve every target.
        best = std::max(best, jaro_winkler(unicode::decode_utf8(target.text), prepared, params));
        if (best == 1.0) {
            break;
        }
    }
    return best;
}

/// Reduces per-unit scores to one value. mean_of_best averages all scores in
/// index order; top_k_mean averages the k largest (ties by lower index).
inline double aggregate_scores(std::span<const double> scores, const AggregationPolicy& policy) {
    if (scores.empty()) {
        throw Error("cannot aggregate an empty score list");
    }
    if (policy.kind == AggregationKind::mean_of_best) {
        double sum = 0.0;
        for (double s : scores) {
            sum += s;
        }
        return sum / static_cast<double>(scores.size());
    }
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
    });
    const std::size_t take = std::min(std::max<std::size_t>(policy.k, 1), scores.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < take; ++i) {
        sum += scores[order[i]];
    }
    return sum / static_cast<double>(take);
}

/// Absorbs rounding in the bound so that pruning never drops a better score.
inline constexpr double kBoundSlack = 1e-12;

/// Symmetrized document similarity from prepared sentences.
inline double document_similarity(const PreparedDocument& a, const PreparedDocument& b,
                                  const JaroWinklerParams& params, const AggregationPolicy& policy) {
    for (const auto* doc : {&a, &b}) {
        if (doc->sentences.empty()) {
            throw Error("document '" + doc->id + "' has no sentences");
        }
    }
    // One pass over all sentence pairs yields best-match scores in both directions.
    std::vector<double> best_a(a.sentences.size(), 0.0);
    std::vector<double> best_b(b.sentences.size(), 0.0);
    for (std::size_t i = 0; i < a.sentences.size(); ++i) {
        const std::u32string_view left = a.sentences[i].view();
        for (std::size_t j = 0; j < b.sentences.size(); ++j) {
            // A pair that cannot beat either running maximum changes nothing.
            const double bound = jaro_winkler_upper_bound(left.size(), b.sentences[j].chars.size(), params);
            if (bound + kBoundSlack <= std::min(best_a[i], best_b[j])) {
                continue;
            }
            const double score = jaro_winkler(left, b.sentences[j], params);
            best_a[i] = std::max(best_a[i], score);
            best_b[j] = std::max(best_b[j], score);
        }
    }
    const double forward = aggregate_scores(best_a, policy);
    const double backward = aggregate_scores(best_b, policy);
    return (forward + backward) / 2.0;
}

inline double document_similarity(const Document& a, const Document& b, const JaroWinklerParams& params = {},
                                  const AggregationPolicy& policy = {}) {
    return document_similarity(prepare(a), prepare(b), params, policy);
}

/// Square document x document matrix. Upper triangle is computed and mirrored;
/// the diagonal is 1 by construction.
inline SimilarityMatrix similarity_matrix(std::span<const Document> docs, const JaroWinklerParams& params = {},
                                          const AggregationPolicy& policy = {}) {
    if (docs.size() < 2) {
        throw Error("similarity matrix needs at least 2 documents, got " + std::to_string(docs.size()));
    }
    params.validate();
    policy.validate();

    std::vector<std::size_t> order(docs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return docs[x].id < docs[y].id; });

    std::vector<PreparedDocument> prepared;
    std::vector<std::string> labels;
    prepared.reserve(docs.size());
    for (std::size_t idx : order) {
        if (docs[idx].sentences.empty()) {
            throw Error("document '" + docs[idx].id + "' has no sentences");
        }
        prepared.push_back(prepare(docs[idx]));
        labels.push_back(docs[idx].id);
    }

    SimilarityMatrix matrix(labels, labels);
    for (std::size_t i = 0; i < prepared.size(); ++i) {
        matrix.at(i, i) = 1.0;
        for (std::size_t j = i + 1; j < prepared.size(); ++j) {
            const double score = document_similarity(prepared[i], prepared[j], params, policy);
            matrix.at(i, j) = score;
            matrix.at(j, i) = score;
        }
    }
    return matrix;
}

} // namespace plansim
