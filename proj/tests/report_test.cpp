// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plansim Authors

#include "test_util.hpp"

#include <plansim/report.hpp>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <gtest/gtest.h>

#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

using namespace plansim;
using plansim::testing::slurp;
using plansim::testing::TempDir;

namespace {

std::size_t count_of(const std::string& haystack, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) {
        ++n;
    }
    return n;
}

/// Parses the document and returns the name of its single root element.
std::string xml_root(const std::string& svg) {
    boost::property_tree::ptree tree;
    std::istringstream in(svg);
    boost::property_tree::read_xml(in, tree);
    std::vector<std::string> roots;
    for (const auto& child : tree) {
        if (child.first != "<xmlcomment>") {
            roots.push_back(child.first);
        }
    }
    return roots.size() == 1 ? roots.front() : "";
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                field.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(field);
            field.clear();
        } else if (c == '\n') {
            row.push_back(field);
            field.clear();
            rows.push_back(row);
            row.clear();
        } else {
            field.push_back(c);
        }
    }
    return rows;
}

SimilarityMatrix labeled(std::size_t rows, std::size_t cols) {
    std::vector<std::string> r, c;
    for (std::size_t i = 0; i < rows; ++i) {
        r.push_back("plan-" + std::to_string(i));
    }
    for (std::size_t j = 0; j < cols; ++j) {
        c.push_back("ods-" + std::to_string(j));
    }
    SimilarityMatrix m(r, c);
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        m.values[i] = static_cast<double>((i * 37) % 101) / 100.0;
    }
    return m;
}

ReportBundle minimal_bundle() {
    ReportBundle bundle;
    bundle.corpus_summary.documents.push_back({"plan", "Plan", 2, 3});
    bundle.term_weights.push_back({"plan", {{"salud", 2, 1.0}, {"paz", 1, 0.5}}});
    bundle.area_scores.push_back({"plan", {{"salud", 2.0 / 3.0}}});
    bundle.doc_matrix = SimilarityMatrix({"plan"}, {"plan"});
    bundle.doc_matrix.at(0, 0) = 1.0;
    SimilarityMatrix align({"plan"}, {"ods-03"});
    align.at(0, 0) = 1.0 / 3.0;
    bundle.alignment_matrix = align;
    return bundle;
}

} // namespace

TEST(MatrixCsv, ExactFormat) {
    SimilarityMatrix m({"a", "b"}, {"a", "b"});
    m.at(0, 0) = 1.0;
    m.at(1, 1) = 1.0;
    EXPECT_EQ(format_matrix_csv(m), ",a,b\na,1.000000,0.000000\nb,0.000000,1.000000\n");

    TempDir dir;
    write_matrix_csv(m, dir / "m.csv");
    EXPECT_EQ(slurp(dir / "m.csv"), ",a,b\na,1.000000,0.000000\nb,0.000000,1.000000\n");
}

TEST(MatrixCsv, AlignmentShape) {
    const auto rows = parse_csv(format_matrix_csv(labeled(18, 17)));
    ASSERT_EQ(rows.size(), 19u);
    for (const auto& row : rows) {
        EXPECT_EQ(row.size(), 18u);
    }
}

TEST(MatrixCsv, RoundTripRecoversLabelsAndValues) {
    std::mt19937_64 rng(4);
    const std::vector<std::string> label_pool{"a", "plan, uno", "dice \"hola\"", "vida-submarina", "ñandú", "x y"};
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t rows = 1 + rng() % 5;
        const std::size_t cols = 1 + rng() % 5;
        std::vector<std::string> r, c;
        for (std::size_t i = 0; i < rows; ++i) {
            r.push_back(label_pool[rng() % label_pool.size()] + std::to_string(i));
        }
        for (std::size_t j = 0; j < cols; ++j) {
            c.push_back(label_pool[rng() % label_pool.size()] + std::to_string(j));
        }
        SimilarityMatrix m(r, c);
        for (auto& v : m.values) {
            v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        }
        const auto parsed = parse_csv(format_matrix_csv(m));
        ASSERT_EQ(parsed.size(), rows + 1);
        EXPECT_EQ(parsed[0][0], "");
        for (std::size_t j = 0; j < cols; ++j) {
            EXPECT_EQ(parsed[0][j + 1], c[j]);
        }
        for (std::size_t i = 0; i < rows; ++i) {
            EXPECT_EQ(parsed[i + 1][0], r[i]);
            for (std::size_t j = 0; j < cols; ++j) {
                EXPECT_NEAR(std::stod(parsed[i + 1][j + 1]), m.at(i, j), 5e-7);
            }
        }
    }
}

TEST(MatrixCsv, UnwritablePathThrows) {
    EXPECT_THROW(write_matrix_csv(labeled(1, 1), "/nonexistent-dir/m.csv"), Error);
}

TEST(TermsCsv, HeaderAndRows) {
    const TermWeights tw{"d", {{"salud", 2, 1.0}, {"programa", 1, 0.5}}};
    EXPECT_EQ(format_terms_csv(tw), "term,count,weight\nsalud,2,1.000000\nprograma,1,0.500000\n");
}

TEST(JsonReport, TopLevelKeysInOrder) {
    const auto json = to_json(minimal_bundle());
    std::vector<std::string> keys;
    for (const auto& [key, value] : json.items()) {
        keys.push_back(key);
    }
    EXPECT_EQ(keys, (std::vector<std::string>{"corpus_summary", "term_weights", "area_scores", "doc_matrix",
                                              "alignment_matrix", "params_echo"}));
}

TEST(JsonReport, DeterministicBytesAndShortNumbers) {
    TempDir dir;
    write_json_report(minimal_bundle(), dir / "a.json");
    write_json_report(minimal_bundle(), dir / "b.json");
    const std::string a = slurp(dir / "a.json");
    EXPECT_EQ(a, slurp(dir / "b.json"));
    EXPECT_NE(a.find("0.333333333"), std::string::npos);
    EXPECT_EQ(a.find("0.3333333333"), std::string::npos);
    EXPECT_NE(a.find("0.666666667"), std::string::npos);

    // No number literal carries more than 9 significant digits.
    const std::regex number(R"((?:^|[\s\[,:])(-?\d+\.\d+(?:e[+-]?\d+)?))");
    for (auto it = std::sregex_iterator(a.begin(), a.end(), number); it != std::sregex_iterator(); ++it) {
        std::string digits;
        for (char ch : (*it)[1].str()) {
            if (ch == 'e') {
                break;
            }
            if (ch >= '0' && ch <= '9') {
                digits.push_back(ch);
            }
        }
        digits.erase(0, digits.find_first_not_of('0'));
        EXPECT_LE(digits.size(), 9u) << (*it)[1].str();
    }
}

TEST(JsonReport, ParamsEchoVerbatim) {
    ReportBundle bundle = minimal_bundle();
    bundle.params_echo.jaro_winkler = {0.1, 4};
    bundle.params_echo.align_policy = {AggregationKind::top_k_mean, 5};
    const auto echo = to_json(bundle)["params_echo"];
    EXPECT_EQ(echo["prefix_scale"].get<double>(), 0.1);
    EXPECT_EQ(echo["max_prefix"].get<int>(), 4);
    EXPECT_EQ(echo["align_aggregation"]["k"].get<int>(), 5);
    EXPECT_EQ(echo["align_aggregation"]["kind"].get<std::string>(), "top-k-mean");
    EXPECT_EQ(echo["compare_aggregation"]["kind"].get<std::string>(), "mean-of-best");
    EXPECT_EQ(echo["version"].get<std::string>(), std::string(kToolVersion));
    EXPECT_EQ(echo["seed"].get<int>(), 42);
}

TEST(JsonReport, MissingAlignmentIsNull) {
    ReportBundle bundle = minimal_bundle();
    bundle.alignment_matrix.reset();
    const auto json = to_json(bundle);
    ASSERT_TRUE(json.contains("alignment_matrix"));
    EXPECT_TRUE(json["alignment_matrix"].is_null());
}

TEST(Heatmap, SingleCell) {
    SimilarityMatrix m({"a"}, {"a"});
    m.at(0, 0) = 1.0;
    const std::string svg = format_heatmap_svg(m);
    EXPECT_EQ(count_of(svg, "<rect "), 1u);
    EXPECT_NE(svg.find("fill=\"" + heat_color(1.0) + "\""), std::string::npos);
    EXPECT_EQ(heat_color(1.0), "#08306b");
    EXPECT_EQ(heat_color(0.0), "#ffffff");
    EXPECT_EQ(xml_root(svg), "svg");
}

TEST(Heatmap, SymmetricMatrixGivesMirroredFills) {
    SimilarityMatrix m({"a", "b", "c"}, {"a", "b", "c"});
    const double vals[3][3] = {{1, 0.2, 0.7}, {0.2, 1, 0.4}, {0.7, 0.4, 1}};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            m.at(i, j) = vals[i][j];
        }
    }
    const std::string svg = format_heatmap_svg(m);
    const std::regex cell(R"re(<rect x="[^"]+" y="[^"]+" width="[^"]+" height="[^"]+" fill="(#[0-9a-f]{6})">)re");
    std::vector<std::string> fills;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), cell); it != std::sregex_iterator(); ++it) {
        fills.push_back((*it)[1].str());
    }
    ASSERT_EQ(fills.size(), 9u);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_EQ(fills[i * 3 + j], fills[j * 3 + i]);
        }
    }
}

TEST(Heatmap, RectangularCellCountAndEscaping) {
    SimilarityMatrix m = labeled(18, 17);
    m.row_labels[0] = "a<b & \"c\"";
    const std::string svg = format_heatmap_svg(m);
    EXPECT_EQ(count_of(svg, "<rect "), 306u);
    EXPECT_EQ(xml_root(svg), "svg");
    EXPECT_EQ(svg, format_heatmap_svg(m));
    EXPECT_THROW(format_heatmap_svg(SimilarityMatrix{}), Error);
}

TEST(WordCloud, SingleTermAtCentreWithMaxFont) {
    const WordCloudStyle style;
    const auto layout = layout_wordcloud({"d", {{"salud", 3, 1.0}}}, 42, style);
    ASSERT_EQ(layout.placed.size(), 1u);
    EXPECT_DOUBLE_EQ(layout.placed[0].x, style.width / 2.0);
    EXPECT_DOUBLE_EQ(layout.placed[0].y, style.height / 2.0);
    EXPECT_DOUBLE_EQ(layout.placed[0].font_size, style.max_font);
    const std::string svg = format_wordcloud_svg(layout, style);
    EXPECT_EQ(count_of(svg, "<text "), 1u);
    EXPECT_NE(svg.find("x=\"400.00\" y=\"300.00\" font-size=\"64.00\""), std::string::npos);
}

TEST(WordCloud, LinearFontSizes) {
    const WordCloudStyle style;
    const auto layout = layout_wordcloud({"d", {{"salud", 2, 1.0}, {"paz", 1, 0.5}}}, 1, style);
    ASSERT_EQ(layout.placed.size(), 2u);
    EXPECT_DOUBLE_EQ(layout.placed[0].font_size, style.max_font);
    EXPECT_DOUBLE_EQ(layout.placed[1].font_size, style.min_font + (style.max_font - style.min_font) * 0.5);
}

TEST(WordCloud, SeededDeterminismAndNoOverlap) {
    TermWeights tw{"d", {}};
    for (int i = 0; i < 60; ++i) {
        tw.entries.push_back({"termino" + std::to_string(i), static_cast<std::size_t>(60 - i), (60.0 - i) / 60.0});
    }
    TempDir dir;
    render_wordcloud_svg(tw, dir / "a.svg", 7);
    render_wordcloud_svg(tw, dir / "b.svg", 7);
    render_wordcloud_svg(tw, dir / "c.svg", 8);
    EXPECT_EQ(slurp(dir / "a.svg"), slurp(dir / "b.svg"));
    EXPECT_NE(slurp(dir / "a.svg"), slurp(dir / "c.svg"));
    EXPECT_EQ(xml_root(slurp(dir / "a.svg")), "svg");

    const WordCloudStyle style;
    const auto layout = layout_wordcloud(tw, 7, style);
    for (std::size_t i = 0; i < layout.placed.size(); ++i) {
        const auto& p = layout.placed[i];
        const double hw = style.glyph_aspect * p.font_size * static_cast<double>(p.term.size()) / 2.0;
        EXPECT_GE(p.x - hw, 0.0);
        EXPECT_LE(p.x + hw, style.width);
        for (std::size_t j = 0; j < i; ++j) {
            const auto& q = layout.placed[j];
            const double qw = style.glyph_aspect * q.font_size * static_cast<double>(q.term.size()) / 2.0;
            const bool overlap = std::abs(p.x - q.x) < hw + qw && std::abs(p.y - q.y) < (p.font_size + q.font_size) / 2.0;
            EXPECT_FALSE(overlap) << p.term << " / " << q.term;
        }
    }
}

TEST(WordCloud, TermsThatDoNotFitAreSkipped) {
    WordCloudStyle tiny;
    tiny.width = 120;
    tiny.height = 40;
    const TermWeights tw{"d", {{"corto", 5, 1.0}, {"extraordinariamente", 1, 0.2}, {"mas", 1, 0.2}}};
    const auto layout = layout_wordcloud(tw, 3, tiny);
    EXPECT_EQ(layout.skipped.size() + layout.placed.size(), 3u);
    EXPECT_NE(std::find(layout.skipped.begin(), layout.skipped.end(), "extraordinariamente"), layout.skipped.end());
    EXPECT_EQ(xml_root(format_wordcloud_svg(layout, tiny)), "svg");
}

TEST(WordCloud, EmptyTermsRejected) {
    TempDir dir;
    EXPECT_THROW(render_wordcloud_svg({"d", {}}, dir / "x.svg", 1), Error);
}
