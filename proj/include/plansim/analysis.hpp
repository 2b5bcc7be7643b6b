// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plansim Authors

#pragma once

#include <plansim/builtin_data.hpp>
#include <plansim/corpus.hpp>
#include <plansim/error.hpp>
#include <plansim/matrix.hpp>
#include <plansim/textsim.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace plansim {

inline constexpr std::size_t kDefaultTopTerms = 100;

struct TermWeight {
    std::string term;
    std::size_t count = 0;
    double weight = 0.0;

    friend bool operator==(const TermWeight&, const TermWeight&) = default;
};

/// Word-cloud input: entries ordered by count descending, then term ascending;
/// weight = count / max count.
struct TermWeights {
    std::string document_id;
    std::vector<TermWeight> entries;

    friend bool operator==(const TermWeights&, const TermWeights&) = default;
};

struct LexiconArea {
    std::string name;
    std::set<std::string> keywords;
};

/// Thematic areas and their keyword sets. Area names are unique and no keyword
/// belongs to two areas; add() enforces both.
class AreaLexicon {
public:
    void add(std::string name, const std::vector<std::string>& keywords) {
        for (const auto& area : areas_) {
            if (area.name == name) {
                throw Error("duplicate lexicon area '" + name + "'");
            }
        }
        LexiconArea area{std::move(name), {}};
        for (const auto& raw : keywords) {
            std::string keyword = normalize_text(raw);
            if (keyword.empty()) {
                continue;
            }
            auto [it, inserted] = owner_.emplace(keyword, areas_.size());
            if (!inserted && it->second != areas_.size()) {
                throw Error("lexicon keyword '" + keyword + "' appears in areas '" + areas_[it->second].name +
                            "' and '" + area.name + "'");
            }
            area.keywords.insert(std::move(keyword));
        }
        areas_.push_back(std::move(area));
    }

    const std::vector<LexiconArea>& areas() const noexcept { return areas_; }
    std::size_t size() const noexcept { return areas_.size(); }
    bool empty() const noexcept { return areas_.empty(); }

    /// Index of the area owning `keyword`, or -1.
    long area_of(const std::string& keyword) const {
        auto it = owner_.find(keyword);
        return it == owner_.end() ? -1 : static_cast<long>(it->second);
    }

private:
    std::vector<LexiconArea> areas_;
    std::unordered_map<std::string, std::size_t> owner_;
};

struct AreaScore {
    std::string area;
    double fraction = 0.0;

    friend bool operator==(const AreaScore&, const AreaScore&) = default;
};

struct AreaScores {
    std::string document_id;
    std::vector<AreaScore> scores;

    friend bool operator==(const AreaScores&, const AreaScores&) = default;
};

/// Parses {"area": ["keyword", ...], ...}; area order follows the file.
inline AreaLexicon parse_lexicon(std::string_view json_text, const std::string& source) {
    nlohmann::ordered_json root;
    try {
        root = nlohmann::ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error("malformed lexicon JSON in " + source + ": " + e.what());
    }
    if (!root.is_object()) {
        throw Error("lexicon must be a JSON object in " + source);
    }
    AreaLexicon lexicon;
    for (const auto& [name, words] : root.items()) {
        if (!words.is_array()) {
            throw Error("lexicon area '" + name + "' must map to an array in " + source);
        }
        std::vector<std::string> keywords;
        for (const auto& w : words) {
            if (!w.is_string()) {
                throw Error("lexicon area '" + name + "' holds a non-string keyword in " + source);
            }
            keywords.push_back(w.get<std::string>());
        }
        lexicon.add(name, keywords);
    }
    if (lexicon.empty()) {
        throw Error("lexicon has no areas: " + source);
    }
    return lexicon;
}

inline AreaLexicon load_lexicon(const std::filesystem::path& path) {
    return parse_lexicon(detail::read_file(path), path.string());
}

inline AreaLexicon builtin_lexicon() { return parse_lexicon(builtin::kAreaLexicon, "builtin-areas"); }

inline TermWeights term_weights(const Document& doc, std::size_t top_n = kDefaultTopTerms) {
    if (doc.tokens.empty()) {
        throw Error("document '" + doc.id + "' has no tokens");
    }
    if (top_n == 0) {
        throw Error("top_n must be positive");
    }
    std::map<std::string, std::size_t> counts;
    for (const auto& token : doc.tokens) {
        ++counts[token.surface];
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
    // std::map iteration already yields ascending terms; a stable sort keeps that order among ties.
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (ranked.size() > top_n) {
        ranked.resize(top_n);
    }
    const double max_count = static_cast<double>(ranked.front().second);

    TermWeights out{doc.id, {}};
    out.entries.reserve(ranked.size());
    for (auto& [term, count] : ranked) {
        out.entries.push_back({std::move(term), count, static_cast<double>(count) / max_count});
    }
    return out;
}

inline AreaScores area_scores(const Document& doc, const AreaLexicon& lexicon) {
    if (doc.tokens.empty()) {
        throw Error("document '" + doc.id + "' has no tokens");
    }
    if (lexicon.empty()) {
        throw Error("area lexicon is empty");
    }
    std::vector<std::size_t> hits(lexicon.size(), 0);
    for (const auto& token : doc.tokens) {
        const long area = lexicon.area_of(token.surface);
        if (area >= 0) {
            ++hits[static_cast<std::size_t>(area)];
        }
    }
    AreaScores out{doc.id, {}};
    const double total = static_cast<double>(doc.tokens.size());
    for (std::size_t i = 0; i < lexicon.size(); ++i) {
        out.scores.push_back({lexicon.areas()[i].name, static_cast<double>(hits[i]) / total});
    }
    return out;
}

/// Documents x goals matrix. Each entry aggregates the Jaro-Winkler scores of
/// every document sentence against the goal statement under `policy`.
inline SimilarityMatrix goal_alignment(std::span<const Document> docs, const GoalCatalog& goals,
                                       const JaroWinklerParams& params = {},
                                       const AggregationPolicy& policy = {AggregationKind::top_k_mean, 5}) {
    if (docs.empty()) {
        throw Error("goal alignment needs at least one document");
    }
    if (goals.empty()) {
        throw Error("goal catalog is empty");
    }
    params.validate();
    policy.validate();

    std::vector<const Document*> sorted;
    for (const auto& d : docs) {
        if (d.sentences.empty()) {
            throw Error("document '" + d.id + "' has no sentences");
        }
        sorted.push_back(&d);
    }
    std::sort(sorted.begin(), sorted.end(), [](const Document* a, const Document* b) { return a->id < b->id; });

    std::vector<std::string> row_labels;
    for (const auto* d : sorted) {
        row_labels.push_back(d->id);
    }
    std::vector<std::string> col_labels;
    std::vector<PreparedText> statements;
    for (const auto& g : goals.goals) {
        col_labels.push_back(g.id);
        statements.emplace_back(g.statement);
    }

    SimilarityMatrix matrix(std::move(row_labels), std::move(col_labels));
    std::vector<double> scores;
    for (std::size_t r = 0; r < sorted.size(); ++r) {
        std::vector<std::u32string> sentences;
        sentences.reserve(sorted[r]->sentences.size());
        for (const auto& s : sorted[r]->sentences) {
            sentences.push_back(unicode::decode_utf8(s.text));
        }
        for (std::size_t c = 0; c < statements.size(); ++c) {
            scores.clear();
            for (const auto& sentence : sentences) {
                scores.push_back(jaro_winkler(sentence, statements[c], params));
            }
            matrix.at(r, c) = aggregate_scores(scores, policy);
        }
    }
    return matrix;
}

} // namespace plansim
