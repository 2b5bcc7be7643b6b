// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plansim Authors

#pragma once

#include <plansim/analysis.hpp>
#include <plansim/corpus.hpp>
#include <plansim/error.hpp>
#include <plansim/matrix.hpp>
#include <plansim/textsim.hpp>
#include <plansim/unicode.hpp>

#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace plansim {

inline constexpr std::string_view kToolVersion = "plansim 0.1.0";

// ---------------------------------------------------------------------------
// Formatting helpers
// ---------------------------------------------------------------------------

/// Locale-independent fixed-point rendering.
inline std::string format_fixed(double value, int decimals) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, decimals);
    return {buf.data(), res.ptr};
}

/// Rounds to 9 significant digits so that JSON output stays short and stable.
inline double round_significant(double value) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 9);
    double rounded = 0.0;
    std::from_chars(buf.data(), res.ptr, rounded);
    return rounded;
}

inline std::string csv_field(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out.push_back(c);
        }
    }
    out += '"';
    return out;
}

inline std::string xml_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

namespace detail {

inline void write_text_file(const std::filesystem::path& out, std::string_view content) {
    std::ofstream file(out, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw Error("cannot write file: " + out.string());
    }
    file.write(content.data(), static_cast<std::streamsize>(content.size()));
    file.close();
    if (!file) {
        throw Error("failed writing file: " + out.string());
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// Labeled table as CSV: a header of an empty cell plus column labels, then
/// one row per label with 6-decimal values. LF line endings.
inline std::string format_table_csv(std::span<const std::string> row_labels, std::span<const std::string> col_labels,
                                    std::span<const double> values) {
    std::string out;
    for (const auto& label : col_labels) {
        out += ',';
        out += csv_field(label);
    }
    out += '\n';
    for (std::size_t r = 0; r < row_labels.size(); ++r) {
        out += csv_field(row_labels[r]);
        for (std::size_t c = 0; c < col_labels.size(); ++c) {
            out += ',';
            out += format_fixed(values[r * col_labels.size() + c], 6);
        }
        out += '\n';
    }
    return out;
}

inline std::string format_matrix_csv(const SimilarityMatrix& m) {
    return format_table_csv(m.row_labels, m.col_labels, m.values);
}

inline void write_matrix_csv(const SimilarityMatrix& m, const std::filesystem::path& out) {
    detail::write_text_file(out, format_matrix_csv(m));
}

inline void write_areas_csv(std::span<const AreaScores> scores, const std::filesystem::path& out) {
    std::vector<std::string> rows;
    std::vector<std::string> cols;
    std::vector<double> values;
    if (!scores.empty()) {
        for (const auto& s : scores.front().scores) {
            cols.push_back(s.area);
        }
    }
    for (const auto& doc : scores) {
        rows.push_back(doc.document_id);
        for (const auto& s : doc.scores) {
            values.push_back(s.fraction);
        }
    }
    detail::write_text_file(out, format_table_csv(rows, cols, values));
}

inline std::string format_terms_csv(const TermWeights& tw) {
    std::string out = "term,count,weight\n";
    for (const auto& e : tw.entries) {
        out += csv_field(e.term);
        out += ',';
        out += std::to_string(e.count);
        out += ',';
        out += format_fixed(e.weight, 6);
        out += '\n';
    }
    return out;
}

inline void write_terms_csv(const TermWeights& tw, const std::filesystem::path& out) {
    detail::write_text_file(out, format_terms_csv(tw));
}

// ---------------------------------------------------------------------------
// JSON report
// ---------------------------------------------------------------------------

struct DocumentSummary {
    std::string id;
    std::string title;
    std::size_t sentences = 0;
    std::size_t tokens = 0;
};

struct CorpusSummary {
    std::vector<DocumentSummary> documents;
};

inline CorpusSummary summarize(std::span<const Document> docs) {
    CorpusSummary summary;
    for (const auto& d : docs) {
        summary.documents.push_back({d.id, d.title, d.sentences.size(), d.tokens.size()});
    }
    return summary;
}

/// Every knob that influenced the numbers of a report.
struct ParamsEcho {
    JaroWinklerParams jaro_winkler;
    AggregationPolicy compare_policy{AggregationKind::mean_of_best, 5};
    AggregationPolicy align_policy{AggregationKind::top_k_mean, 5};
    std::size_t top_n = kDefaultTopTerms;
    std::uint64_t seed = 42;
    std::string stopwords_source = "builtin-spanish";
    std::string version{kToolVersion};
};

struct ReportBundle {
    CorpusSummary corpus_summary;
    std::vector<TermWeights> term_weights;
    std::vector<AreaScores> area_scores;
    SimilarityMatrix doc_matrix;
    std::optional<SimilarityMatrix> alignment_matrix;
    ParamsEcho params_echo;
};

namespace detail {

inline nlohmann::ordered_json matrix_json(const SimilarityMatrix& m) {
    nlohmann::ordered_json j;
    j["row_labels"] = m.row_labels;
    j["col_labels"] = m.col_labels;
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = nlohmann::ordered_json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            row.push_back(round_significant(m.at(r, c)));
        }
        rows.push_back(std::move(row));
    }
    j["values"] = std::move(rows);
    return j;
}

inline nlohmann::ordered_json policy_json(const AggregationPolicy& p) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(p.kind);
    j["k"] = p.k;
    return j;
}

} // namespace detail

inline nlohmann::ordered_json to_json(const ReportBundle& bundle) {
    nlohmann::ordered_json root;

    auto& summary = root["corpus_summary"];
    summary["document_count"] = bundle.corpus_summary.documents.size();
    summary["documents"] = nlohmann::ordered_json::array();
    for (const auto& d : bundle.corpus_summary.documents) {
        nlohmann::ordered_json entry;
        entry["id"] = d.id;
        entry["title"] = d.title;
        entry["sentences"] = d.sentences;
        entry["tokens"] = d.tokens;
        summary["documents"].push_back(std::move(entry));
    }

    root["term_weights"] = nlohmann::ordered_json::array();
    for (const auto& tw : bundle.term_weights) {
        nlohmann::ordered_json entry;
        entry["document_id"] = tw.document_id;
        entry["entries"] = nlohmann::ordered_json::array();
        for (const auto& e : tw.entries) {
            nlohmann::ordered_json term;
            term["term"] = e.term;
            term["count"] = e.count;
            term["weight"] = round_significant(e.weight);
            entry["entries"].push_back(std::move(term));
        }
        root["term_weights"].push_back(std::move(entry));
    }

    root["area_scores"] = nlohmann::ordered_json::array();
    for (const auto& as : bundle.area_scores) {
        nlohmann::ordered_json entry;
        entry["document_id"] = as.document_id;
        entry["scores"] = nlohmann::ordered_json::array();
        for (const auto& s : as.scores) {
            nlohmann::ordered_json area;
            area["area"] = s.area;
            area["fraction"] = round_significant(s.fraction);
            entry["scores"].push_back(std::move(area));
        }
        root["area_scores"].push_back(std::move(entry));
    }

    root["doc_matrix"] = detail::matrix_json(bundle.doc_matrix);
    root["alignment_matrix"] =
        bundle.alignment_matrix ? detail::matrix_json(*bundle.alignment_matrix) : nlohmann::ordered_json(nullptr);

    const auto& p = bundle.params_echo;
    auto& echo = root["params_echo"];
    echo["prefix_scale"] = p.jaro_winkler.prefix_scale;
    echo["max_prefix"] = p.jaro_winkler.max_prefix;
    echo["compare_aggregation"] = detail::policy_json(p.compare_policy);
    echo["align_aggregation"] = detail::policy_json(p.align_policy);
    echo["top_n"] = p.top_n;
    echo["seed"] = p.seed;
    echo["stopwords"] = p.stopwords_source;
    echo["version"] = p.version;
    return root;
}

inline void write_json_report(const ReportBundle& bundle, const std::filesystem::path& out) {
    detail::write_text_file(out, to_json(bundle).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Heatmap SVG
// ---------------------------------------------------------------------------

/// Fill colour for a score: white at 0, dark blue at 1, linear per channel.
inline std::string heat_color(double value) {
    constexpr std::array<int, 3> low{255, 255, 255};
    constexpr std::array<int, 3> high{8, 48, 107};
    const double v = std::clamp(value, 0.0, 1.0);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out = "#";
    for (std::size_t ch = 0; ch < 3; ++ch) {
        const auto c = static_cast<int>(std::lround(low[ch] + (high[ch] - low[ch]) * v));
        out.push_back(hex[(c >> 4) & 0xF]);
        out.push_back(hex[c & 0xF]);
    }
    return out;
}

inline std::string format_heatmap_svg(const SimilarityMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) {
        throw Error("cannot render an empty matrix");
    }
    constexpr double cell = 28.0;
    constexpr double char_width = 7.0;
    std::size_t longest_row = 0;
    std::size_t longest_col = 0;
    for (const auto& l : m.row_labels) {
        longest_row = std::max(longest_row, unicode::code_point_count(l));
    }
    for (const auto& l : m.col_labels) {
        longest_col = std::max(longest_col, unicode::code_point_count(l));
    }
    const double left = 12.0 + char_width * static_cast<double>(longest_row);
    const double top = 12.0 + char_width * static_cast<double>(longest_col);
    const double width = left + cell * static_cast<double>(m.cols()) + 10.0;
    const double height = top + cell * static_cast<double>(m.rows()) + 10.0;

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_fixed(width, 0) + "\" height=\"" +
           format_fixed(height, 0) + "\" viewBox=\"0 0 " + format_fixed(width, 0) + " " + format_fixed(height, 0) +
           "\" font-family=\"sans-serif\" font-size=\"11\">\n";

    svg += "<g class=\"row-labels\">\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const double y = top + cell * static_cast<double>(r) + cell / 2.0;
        svg += "<text x=\"" + format_fixed(left - 6.0, 1) + "\" y=\"" + format_fixed(y, 1) +
               "\" text-anchor=\"end\" dominant-baseline=\"central\">" + xml_escape(m.row_labels[r]) + "</text>\n";
    }
    svg += "</g>\n<g class=\"col-labels\">\n";
    for (std::size_t c = 0; c < m.cols(); ++c) {
        const double x = left + cell * static_cast<double>(c) + cell / 2.0;
        svg += "<text transform=\"translate(" + format_fixed(x, 1) + "," + format_fixed(top - 6.0, 1) +
               ") rotate(-90)\" text-anchor=\"start\" dominant-baseline=\"central\">" + xml_escape(m.col_labels[c]) +
               "</text>\n";
    }
    svg += "</g>\n<g class=\"cells\">\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const double v = m.at(r, c);
            svg += "<rect x=\"" + format_fixed(left + cell * static_cast<double>(c), 1) + "\" y=\"" +
                   format_fixed(top + cell * static_cast<double>(r), 1) + "\" width=\"" + format_fixed(cell, 1) +
                   "\" height=\"" + format_fixed(cell, 1) + "\" fill=\"" + heat_color(v) + "\"><title>" +
                   xml_escape(m.row_labels[r]) + " / " + xml_escape(m.col_labels[c]) + ": " + format_fixed(v, 6) +
                   "</title></rect>\n";
        }
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

inline void render_heatmap_svg(const SimilarityMatrix& m, const std::filesystem::path& out) {
    detail::write_text_file(out, format_heatmap_svg(m));
}

// ---------------------------------------------------------------------------
// Word cloud
// ---------------------------------------------------------------------------

struct WordCloudStyle {
    double width = 800.0;
    double height = 600.0;
    double min_font = 12.0;
    double max_font = 64.0;
    double glyph_aspect = 0.6;   // estimated glyph advance / font size
    double spiral_spacing = 2.0; // radius growth per radian
    double spiral_step = 0.1;    // radians per probe
};

struct PlacedTerm {
    std::string term;
    double x = 0.0;
    double y = 0.0;
    double font_size = 0.0;
    std::string color;
};

struct WordCloudLayout {
    std::vector<PlacedTerm> placed;
    std::vector<std::string> skipped;
};

inline double font_size_for(double weight, const WordCloudStyle& style) {
    return style.min_font + (style.max_font - style.min_font) * std::clamp(weight, 0.0, 1.0);
}

/// Places terms in entry order along an archimedean spiral from the canvas
/// centre; each term starts at a seeded random phase and takes the first
/// position whose box stays on the canvas and overlaps no placed box.
inline WordCloudLayout layout_wordcloud(const TermWeights& tw, std::uint64_t seed, const WordCloudStyle& style = {}) {
    static constexpr std::array<std::string_view, 6> palette{"#1b4f72", "#7b241c", "#186a3b",
                                                             "#6c3483", "#b9770e", "#2e4053"};
    struct Box {
        double x0, y0, x1, y1;
    };
    std::mt19937_64 rng(seed);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    const double cx = style.width / 2.0;
    const double cy = style.height / 2.0;
    const double max_radius = std::hypot(style.width, style.height) / 2.0;

    WordCloudLayout layout;
    std::vector<Box> boxes;
    for (const auto& entry : tw.entries) {
        const double size = font_size_for(entry.weight, style);
        const double half_w =
            style.glyph_aspect * size * static_cast<double>(unicode::code_point_count(entry.term)) / 2.0;
        const double half_h = size / 2.0;
        const double phase = unit() * 2.0 * std::numbers::pi;
        const std::string_view color = palette[static_cast<std::size_t>(unit() * palette.size()) % palette.size()];

        bool placed = false;
        for (double t = 0.0;; t += style.spiral_step) {
            const double radius = style.spiral_spacing * t;
            if (radius > max_radius) {
                break;
            }
            const double x = cx + radius * std::cos(t + phase);
            const double y = cy + radius * std::sin(t + phase);
            const Box box{x - half_w, y - half_h, x + half_w, y + half_h};
            if (box.x0 < 0.0 || box.y0 < 0.0 || box.x1 > style.width || box.y1 > style.height) {
                continue;
            }
            const bool collides = std::any_of(boxes.begin(), boxes.end(), [&](const Box& o) {
                return box.x0 < o.x1 && o.x0 < box.x1 && box.y0 < o.y1 && o.y0 < box.y1;
            });
            if (!collides) {
                boxes.push_back(box);
                layout.placed.push_back({entry.term, x, y, size, std::string(color)});
                placed = true;
                break;
            }
        }
        if (!placed) {
            layout.skipped.push_back(entry.term);
        }
    }
    return layout;
}

inline std::string format_wordcloud_svg(const WordCloudLayout& layout, const WordCloudStyle& style = {}) {
    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_fixed(style.width, 0) + "\" height=\"" +
           format_fixed(style.height, 0) + "\" viewBox=\"0 0 " + format_fixed(style.width, 0) + " " +
           format_fixed(style.height, 0) + "\" font-family=\"sans-serif\">\n";
    for (const auto& p : layout.placed) {
        svg += "<text x=\"" + format_fixed(p.x, 2) + "\" y=\"" + format_fixed(p.y, 2) + "\" font-size=\"" +
               format_fixed(p.font_size, 2) + "\" fill=\"" + p.color +
               "\" text-anchor=\"middle\" dominant-baseline=\"central\">" + xml_escape(p.term) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

/// Lays out and writes a word cloud. Terms that do not fit are left out and
/// reported in the returned layout's `skipped` list.
inline WordCloudLayout render_wordcloud_svg(const TermWeights& tw, const std::filesystem::path& out,
                                            std::uint64_t seed, const WordCloudStyle& style = {}) {
    if (tw.entries.empty()) {
        throw Error("word cloud for '" + tw.document_id + "' has no terms");
    }
    WordCloudLayout layout = layout_wordcloud(tw, seed, style);
    detail::write_text_file(out, format_wordcloud_svg(layout, style));
    return layout;
}

} // namespace plansim
