// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plansim Authors

#include <plansim/commands.hpp>

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <string>

namespace {

void add_common_flags(CLI::App& sub, plansim::RunConfig& cfg) {
    sub.add_option("--corpus", cfg.corpus_dir, "Directory of UTF-8 .txt documents")->required();
    sub.add_option("--goals", cfg.goals_file, "Goal catalog JSON");
    sub.add_option("--stopwords", cfg.stopwords_file, "Stopword file (default: built-in Spanish list)");
    sub.add_option("--lexicon", cfg.lexicon_file, "Area lexicon JSON (default: built-in)");
    sub.add_option("--output", cfg.output_dir, "Output directory")->capture_default_str();
    sub.add_option("--top", cfg.top_n, "Terms per word cloud")->capture_default_str();
    sub.add_option("--k", cfg.k, "k for top-k-mean aggregation")->capture_default_str();
    sub.add_option("--prefix-scale", cfg.prefix_scale, "Winkler prefix scale p")->capture_default_str();
    sub.add_option("--max-prefix", cfg.max_prefix, "Winkler prefix length cap")->capture_default_str();
    sub.add_option_function<std::string>(
           "--aggregation",
           [&cfg](const std::string& name) {
               cfg.aggregation = name == "mean-of-best" ? plansim::AggregationKind::mean_of_best
                                                        : plansim::AggregationKind::top_k_mean;
           },
           "Sentence score aggregation (default: mean-of-best for compare, top-k-mean for align)")
        ->check(CLI::IsMember({"mean-of-best", "top-k-mean"}))
        ->type_name("KIND");
    sub.add_option("--seed", cfg.seed, "Word-cloud layout seed")->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Similarity and goal-alignment reports for a corpus of plan documents"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(plansim::kToolVersion));

    plansim::RunConfig cfg;
    using Command = std::function<int(const plansim::RunConfig&, std::ostream&)>;
    const std::pair<const char*, Command> commands[] = {
        {"wordcloud", plansim::cmd_wordcloud},
        {"areas", plansim::cmd_areas},
        {"compare", plansim::cmd_compare},
        {"align", plansim::cmd_align},
        {"report", plansim::cmd_report},
    };
    const char* help[] = {
        "Word cloud SVG and term CSV per document",
        "Thematic-area fractions per document",
        "Document x document similarity matrix",
        "Document x goal alignment matrix",
        "Run every stage and write report.json",
    };

    Command selected;
    for (std::size_t i = 0; i < std::size(commands); ++i) {
        CLI::App* sub = app.add_subcommand(commands[i].first, help[i]);
        add_common_flags(*sub, cfg);
        sub->callback([&selected, fn = commands[i].second] { selected = fn; });
    }

    CLI11_PARSE(app, argc, argv);
    return selected(cfg, std::cerr);
}
