// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plansim Authors

#pragma once

#include <plansim/builtin_data.hpp>
#include <plansim/error.hpp>
#include <plansim/unicode.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace plansim {

inline constexpr std::size_t kMinTokenLength = 2;

struct NormalizedSentence {
    std::size_t index = 0;
    std::string text;

    friend bool operator==(const NormalizedSentence&, const NormalizedSentence&) = default;
};

struct Token {
    std::string surface;
    std::size_t sentence_index = 0;

    friend bool operator==(const Token&, const Token&) = default;
};

struct Document {
    std::string id;
    std::string title;
    std::string raw_text;
    std::vector<NormalizedSentence> sentences;
    std::vector<Token> tokens;

    friend bool operator==(const Document&, const Document&) = default;
};

struct Goal {
    std::string id;
    std::string name;
    std::string statement;
};

struct GoalCatalog {
    std::vector<Goal> goals;

    std::size_t size() const noexcept { return goals.size(); }
    bool empty() const noexcept { return goals.empty(); }
};

class StopwordList {
public:
    StopwordList() = default;
    explicit StopwordList(std::string source) : source_(std::move(source)) {}

    template <typename Range>
    StopwordList(const Range& words, std::string source) : source_(std::move(source)) {
        for (const auto& w : words) {
            add(w);
        }
    }

    /// Stores the normalized form of `word`; blank entries are ignored.
    void add(std::string_view word) {
        std::string normalized = normalize_text(word);
        if (!normalized.empty()) {
            words_.insert(std::move(normalized));
        }
    }

    bool contains(const std::string& word) const { return words_.count(word) != 0; }
    std::size_t size() const noexcept { return words_.size(); }
    const std::string& source() const noexcept { return source_; }
    const std::unordered_set<std::string>& words() const noexcept { return words_; }

private:
    std::unordered_set<std::string> words_;
    std::string source_;
};

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read file: " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string_view trim_spaces(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

} // namespace detail

/// Parses the stopword file format: one word per line, '#' starts a comment line.
inline StopwordList parse_stopwords(std::string_view text, std::string source) {
    if (!unicode::is_valid_utf8(text)) {
        throw Error("stopword file is not valid UTF-8: " + source);
    }
    StopwordList list(std::move(source));
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = detail::trim_spaces(text.substr(start, end - start));
        if (!line.empty() && line.front() != '#') {
            list.add(line);
        }
        start = end + 1;
    }
    return list;
}

inline StopwordList load_stopwords(const std::filesystem::path& path) {
    return parse_stopwords(detail::read_file(path), path.string());
}

inline StopwordList builtin_stopwords() {
    return parse_stopwords(builtin::kStopwordsSpanish, "builtin-spanish");
}

/// Splits normalized text on '.', '!', '?' and newline. Fragments are trimmed;
/// empty ones are dropped. Indices are consecutive from 0.
inline std::vector<NormalizedSentence> segment_sentences(std::string_view normalized) {
    std::vector<NormalizedSentence> out;
    std::size_t start = 0;
    auto flush = [&](std::size_t end) {
        std::string_view fragment = detail::trim_spaces(normalized.substr(start, end - start));
        if (!fragment.empty()) {
            out.push_back({out.size(), std::string(fragment)});
        }
    };
    for (std::size_t i = 0; i < normalized.size(); ++i) {
        const char c = normalized[i];
        if (c == '.' || c == '!' || c == '?' || c == '\n') {
            flush(i);
            start = i + 1;
        }
    }
    flush(normalized.size());
    return out;
}

/// Maximal runs of letters, at least two code points long, not in `stopwords`.
inline std::vector<Token> tokenize(const NormalizedSentence& sentence, const StopwordList& stopwords) {
    std::vector<Token> out;
    const std::u32string chars = unicode::decode_utf8(sentence.text);
    std::size_t i = 0;
    while (i < chars.size()) {
        if (!unicode::is_letter(chars[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < chars.size() && unicode::is_letter(chars[j])) {
            ++j;
        }
        if (j - i >= kMinTokenLength) {
            std::string surface = unicode::encode_utf8(std::u32string_view(chars).substr(i, j - i));
            if (!stopwords.contains(surface)) {
                out.push_back({std::move(surface), sentence.index});
            }
        }
        i = j;
    }
    return out;
}

/// Lowercased, diacritic-folded ASCII slug; other characters become single hyphens.
inline std::string slugify(std::string_view name) {
    const std::string folded = normalize_text(name);
    std::string slug;
    for (unsigned char c : folded) {
        const bool alnum = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
        if (alnum) {
            slug.push_back(static_cast<char>(c));
        } else if (!slug.empty() && slug.back() != '-') {
            slug.push_back('-');
        }
    }
    while (!slug.empty() && slug.back() == '-') {
        slug.pop_back();
    }
    return slug;
}

/// Full preprocessing of one document. Each raw line is normalized on its own
/// so that line breaks survive as sentence terminators.
inline Document make_document(std::string id, std::string title, std::string raw_text,
                              const StopwordList& stopwords) {
    if (!unicode::is_valid_utf8(raw_text)) {
        throw Error("document is not valid UTF-8: " + title);
    }
    std::string normalized;
    normalized.reserve(raw_text.size());
    std::string_view rest = raw_text;
    while (true) {
        const std::size_t nl = rest.find('\n');
        normalized += normalize_text(rest.substr(0, nl));
        if (nl == std::string_view::npos) {
            break;
        }
        normalized.push_back('\n');
        rest.remove_prefix(nl + 1);
    }

    Document doc;
    doc.id = std::move(id);
    doc.title = std::move(title);
    doc.raw_text = std::move(raw_text);
    doc.sentences = segment_sentences(normalized);
    for (const auto& sentence : doc.sentences) {
        auto tokens = tokenize(sentence, stopwords);
        doc.tokens.insert(doc.tokens.end(), std::make_move_iterator(tokens.begin()),
                          std::make_move_iterator(tokens.end()));
    }
    return doc;
}

/// Loads every `.txt` file of `dir` as a Document, sorted by id.
inline std::vector<Document> load_corpus(const std::filesystem::path& dir,
                                         const StopwordList& stopwords) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        throw Error("corpus directory not found: " + dir.string());
    }

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            files.push_back(entry.path());
        }
    }
    if (files.empty()) {
        throw Error("no documents in " + dir.string());
    }

    std::vector<Document> docs;
    docs.reserve(files.size());
    for (const auto& file : files) {
        std::string raw = detail::read_file(file);
        if (!unicode::is_valid_utf8(raw)) {
            throw Error("file is not valid UTF-8: " + file.string());
        }
        std::string title = file.stem().string();
        std::string id = slugify(title);
        if (id.empty()) {
            throw Error("cannot derive a document id from file name: " + file.string());
        }
        docs.push_back(make_document(std::move(id), std::move(title), std::move(raw), stopwords));
    }

    std::sort(docs.begin(), docs.end(),
              [](const Document& a, const Document& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < docs.size(); ++i) {
        if (docs[i].id == docs[i - 1].id) {
            throw Error("duplicate document id '" + docs[i].id + "' from '" + docs[i - 1].title + ".txt' and '" +
                        docs[i].title + ".txt' in " + dir.string());
        }
    }
    return docs;
}

/// Parses a goal catalog: a JSON array of {"id", "name", "statement"} objects.
inline GoalCatalog parse_goals(std::string_view json_text, const std::string& source) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error("malformed goals JSON in " + source + ": " + e.what());
    }
    if (!root.is_array()) {
        throw Error("goals file must hold a JSON array: " + source);
    }

    GoalCatalog catalog;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < root.size(); ++i) {
        const auto& entry = root[i];
        const std::string where = "goal entry #" + std::to_string(i) + " in " + source;
        if (!entry.is_object()) {
            throw Error(where + " is not an object");
        }
        for (const char* key : {"id", "name", "statement"}) {
            if (!entry.contains(key) || !entry[key].is_string()) {
                throw Error(where + " lacks string field '" + key + "'");
            }
        }
        Goal goal;
        goal.id = entry["id"].get<std::string>();
        if (goal.id.empty()) {
            throw Error(where + " has an empty id");
        }
        if (!seen.insert(goal.id).second) {
            throw Error("duplicate goal id '" + goal.id + "' in " + source);
        }
        goal.name = normalize_text(entry["name"].get<std::string>());
        goal.statement = normalize_text(entry["statement"].get<std::string>());
        if (goal.statement.empty()) {
            throw Error("goal '" + goal.id + "' has an empty statement in " + source);
        }
        catalog.goals.push_back(std::move(goal));
    }
    return catalog;
}

inline GoalCatalog load_goals(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
        throw Error("goals file not found: " + path.string());
    }
    return parse_goals(detail::read_file(path), path.string());
}

} // namespace plansim
