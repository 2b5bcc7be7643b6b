// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plansim Authors

#pragma once

#include <plansim/analysis.hpp>
#include <plansim/corpus.hpp>
#include <plansim/error.hpp>
#include <plansim/report.hpp>
#include <plansim/textsim.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace plansim {

/// Resolved settings for one CLI invocation.
struct RunConfig {
    std::filesystem::path corpus_dir;
    std::optional<std::filesystem::path> goals_file;
    std::optional<std::filesystem::path> stopwords_file;
    std::optional<std::filesystem::path> lexicon_file;
    std::filesystem::path output_dir = ".";
    long top_n = static_cast<long>(kDefaultTopTerms);
    long k = 5;
    double prefix_scale = 0.1;
    long max_prefix = 4;
    std::optional<AggregationKind> aggregation;
    std::uint64_t seed = 42;

    JaroWinklerParams jaro_winkler() const {
        return {prefix_scale, static_cast<std::size_t>(max_prefix)};
    }
    AggregationPolicy compare_policy() const {
        return {aggregation.value_or(AggregationKind::mean_of_best), static_cast<std::size_t>(k)};
    }
    AggregationPolicy align_policy() const {
        return {aggregation.value_or(AggregationKind::top_k_mean), static_cast<std::size_t>(k)};
    }
};

/// Checks every knob; messages name the command-line flag.
inline void validate(const RunConfig& cfg) {
    if (cfg.corpus_dir.empty()) {
        throw Error("--corpus is required");
    }
    if (cfg.top_n < 1) {
        throw Error("--top must be a positive integer");
    }
    if (cfg.k < 1) {
        throw Error("--k must be a positive integer");
    }
    if (!(cfg.prefix_scale >= 0.0 && cfg.prefix_scale <= 0.25)) {
        throw Error("--prefix-scale must lie in [0, 0.25]");
    }
    if (cfg.max_prefix < 0) {
        throw Error("--max-prefix must be non-negative");
    }
    if (cfg.prefix_scale * static_cast<double>(cfg.max_prefix) > 1.0) {
        throw Error("--prefix-scale times --max-prefix must not exceed 1");
    }
}

inline std::string describe(const RunConfig& cfg, std::string_view command) {
    auto opt = [](const std::optional<std::filesystem::path>& p, std::string_view fallback) {
        return p ? p->string() : std::string(fallback);
    };
    std::string out;
    out += std::string(kToolVersion) + " " + std::string(command) + "\n";
    out += "  --corpus " + cfg.corpus_dir.string() + "\n";
    out += "  --goals " + opt(cfg.goals_file, "(none)") + "\n";
    out += "  --stopwords " + opt(cfg.stopwords_file, "builtin-spanish") + "\n";
    out += "  --lexicon " + opt(cfg.lexicon_file, "builtin-areas") + "\n";
    out += "  --output " + cfg.output_dir.string() + "\n";
    out += "  --top " + std::to_string(cfg.top_n) + "\n";
    out += "  --k " + std::to_string(cfg.k) + "\n";
    out += "  --prefix-scale " + format_fixed(cfg.prefix_scale, 6) + "\n";
    out += "  --max-prefix " + std::to_string(cfg.max_prefix) + "\n";
    out += "  --aggregation compare=" + std::string(to_string(cfg.compare_policy().kind)) +
           " align=" + std::string(to_string(cfg.align_policy().kind)) + "\n";
    out += "  --seed " + std::to_string(cfg.seed) + "\n";
    return out;
}

namespace detail {

inline StopwordList resolve_stopwords(const RunConfig& cfg) {
    return cfg.stopwords_file ? load_stopwords(*cfg.stopwords_file) : builtin_stopwords();
}

inline AreaLexicon resolve_lexicon(const RunConfig& cfg) {
    return cfg.lexicon_file ? load_lexicon(*cfg.lexicon_file) : builtin_lexicon();
}

inline std::vector<Document> prepare_run(const RunConfig& cfg, std::string_view command, std::ostream& err) {
    validate(cfg);
    err << describe(cfg, command);
    std::vector<Document> docs = load_corpus(cfg.corpus_dir, resolve_stopwords(cfg));
    std::filesystem::create_directories(cfg.output_dir);
    return docs;
}

inline std::vector<TermWeights> emit_wordclouds(const RunConfig& cfg, std::span<const Document> docs,
                                                std::ostream& err) {
    std::vector<TermWeights> all;
    for (const auto& doc : docs) {
        TermWeights tw = term_weights(doc, static_cast<std::size_t>(cfg.top_n));
        write_terms_csv(tw, cfg.output_dir / ("terms-" + doc.id + ".csv"));
        const WordCloudLayout layout =
            render_wordcloud_svg(tw, cfg.output_dir / ("wordcloud-" + doc.id + ".svg"), cfg.seed);
        if (!layout.skipped.empty()) {
            err << "warning: word cloud for '" << doc.id << "' skipped terms that did not fit:";
            for (const auto& term : layout.skipped) {
                err << ' ' << term;
            }
            err << '\n';
        }
        all.push_back(std::move(tw));
    }
    return all;
}

inline std::vector<AreaScores> emit_areas(const RunConfig& cfg, std::span<const Document> docs) {
    const AreaLexicon lexicon = resolve_lexicon(cfg);
    std::vector<AreaScores> all;
    for (const auto& doc : docs) {
        all.push_back(area_scores(doc, lexicon));
    }
    write_areas_csv(all, cfg.output_dir / "areas.csv");
    return all;
}

inline SimilarityMatrix emit_compare(const RunConfig& cfg, std::span<const Document> docs) {
    SimilarityMatrix m = similarity_matrix(docs, cfg.jaro_winkler(), cfg.compare_policy());
    write_matrix_csv(m, cfg.output_dir / "doc-similarity.csv");
    render_heatmap_svg(m, cfg.output_dir / "doc-similarity.svg");
    return m;
}

inline SimilarityMatrix emit_align(const RunConfig& cfg, std::span<const Document> docs, const GoalCatalog& goals) {
    SimilarityMatrix m = goal_alignment(docs, goals, cfg.jaro_winkler(), cfg.align_policy());
    write_matrix_csv(m, cfg.output_dir / "goal-alignment.csv");
    render_heatmap_svg(m, cfg.output_dir / "goal-alignment.svg");
    return m;
}

template <typename Body>
int run_guarded(std::ostream& err, Body&& body) {
    try {
        body();
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace detail

/// Writes wordcloud-<id>.svg and terms-<id>.csv for every document.
inline int cmd_wordcloud(const RunConfig& cfg, std::ostream& err) {
    return detail::run_guarded(err, [&] {
        const auto docs = detail::prepare_run(cfg, "wordcloud", err);
        detail::emit_wordclouds(cfg, docs, err);
    });
}

/// Writes areas.csv.
inline int cmd_areas(const RunConfig& cfg, std::ostream& err) {
    return detail::run_guarded(err, [&] {
        const auto docs = detail::prepare_run(cfg, "areas", err);
        detail::emit_areas(cfg, docs);
    });
}

/// Writes doc-similarity.csv and doc-similarity.svg.
inline int cmd_compare(const RunConfig& cfg, std::ostream& err) {
    return detail::run_guarded(err, [&] {
        const auto docs = detail::prepare_run(cfg, "compare", err);
        detail::emit_compare(cfg, docs);
    });
}

/// Writes goal-alignment.csv and goal-alignment.svg.
inline int cmd_align(const RunConfig& cfg, std::ostream& err) {
    if (!cfg.goals_file) {
        err << "error: align requires --goals FILE\n"
               "usage: plansim align --corpus DIR --goals FILE [--output DIR] [--k K]\n";
        return 2;
    }
    return detail::run_guarded(err, [&] {
        const auto docs = detail::prepare_run(cfg, "align", err);
        const GoalCatalog goals = load_goals(*cfg.goals_file);
        detail::emit_align(cfg, docs, goals);
    });
}

/// Runs every stage and writes report.json next to the per-stage artifacts.
/// A failing stage aborts; files from earlier stages stay on disk.
inline int cmd_report(const RunConfig& cfg, std::ostream& err) {
    return detail::run_guarded(err, [&] {
        const auto docs = detail::prepare_run(cfg, "report", err);
        std::optional<GoalCatalog> goals;
        if (cfg.goals_file) {
            goals = load_goals(*cfg.goals_file);
        }

        ReportBundle bundle;
        bundle.corpus_summary = summarize(docs);
        bundle.term_weights = detail::emit_wordclouds(cfg, docs, err);
        bundle.area_scores = detail::emit_areas(cfg, docs);
        bundle.doc_matrix = detail::emit_compare(cfg, docs);
        if (goals) {
            bundle.alignment_matrix = detail::emit_align(cfg, docs, *goals);
        }
        bundle.params_echo.jaro_winkler = cfg.jaro_winkler();
        bundle.params_echo.compare_policy = cfg.compare_policy();
        bundle.params_echo.align_policy = cfg.align_policy();
        bundle.params_echo.top_n = static_cast<std::size_t>(cfg.top_n);
        bundle.params_echo.seed = cfg.seed;
        bundle.params_echo.stopwords_source = cfg.stopwords_file ? cfg.stopwords_file->string() : "builtin-spanish";
        write_json_report(bundle, cfg.output_dir / "report.json");
    });
}

} // namespace plansim
