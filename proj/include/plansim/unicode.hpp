// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plansim Authors

#pragma once

#include <plansim/error.hpp>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace plansim {

namespace unicode {

/// Returns true when `text` is well-formed UTF-8 (no surrogates, no overlongs).
inline bool is_valid_utf8(std::string_view text) noexcept {
    const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
    const auto length = static_cast<std::int32_t>(text.size());
    std::int32_t i = 0;
    while (i < length) {
        UChar32 c;
        U8_NEXT(bytes, i, length, c);
        if (c < 0) {
            return false;
        }
    }
    return true;
}

/// Decodes UTF-8 into code points. Throws plansim::Error on malformed input.
inline std::u32string decode_utf8(std::string_view text) {
    std::u32string out;
    out.reserve(text.size());
    const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
    const auto length = static_cast<std::int32_t>(text.size());
    std::int32_t i = 0;
    while (i < length) {
        UChar32 c;
        U8_NEXT(bytes, i, length, c);
        if (c < 0) {
            throw Error("invalid UTF-8 sequence at byte " + std::to_string(i));
        }
        out.push_back(static_cast<char32_t>(c));
    }
    return out;
}

inline void append_utf8(std::string& out, char32_t c) {
    std::uint8_t buf[U8_MAX_LENGTH];
    std::int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (!error) {
        out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
    }
}

inline std::string encode_utf8(std::u32string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char32_t c : text) {
        append_utf8(out, c);
    }
    return out;
}

inline std::size_t code_point_count(std::string_view text) noexcept {
    std::size_t n = 0;
    for (unsigned char byte : text) {
        n += (byte & 0xC0u) != 0x80u;
    }
    return n;
}

inline bool is_letter(char32_t c) noexcept {
    return (U_GET_GC_MASK(static_cast<UChar32>(c)) & U_GC_L_MASK) != 0;
}

inline bool is_space(char32_t c) noexcept {
    return u_isUWhiteSpace(static_cast<UChar32>(c)) != 0;
}

namespace detail {

// Compatibility case folding, then canonical decomposition with every
// nonspacing mark dropped, then canonical recomposition.
inline icu::UnicodeString fold_once(const icu::UnicodeString& input) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfkc_cf = icu::Normalizer2::getNFKCCasefoldInstance(status);
    const icu::Normalizer2* nfd = icu::Normalizer2::getNFDInstance(status);
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) {
        throw Error(std::string("ICU normalizer unavailable: ") + u_errorName(status));
    }

    icu::UnicodeString folded = nfkc_cf->normalize(input, status);
    icu::UnicodeString decomposed = nfd->normalize(folded, status);

    icu::UnicodeString stripped;
    for (std::int32_t i = 0; i < decomposed.length();) {
        const UChar32 c = decomposed.char32At(i);
        if ((U_GET_GC_MASK(c) & U_GC_MN_MASK) == 0) {
            stripped.append(c);
        }
        i += U16_LENGTH(c);
    }

    icu::UnicodeString composed = nfc->normalize(stripped, status);
    if (U_FAILURE(status)) {
        throw Error(std::string("ICU normalization failed: ") + u_errorName(status));
    }
    return composed;
}

inline icu::UnicodeString collapse_whitespace(const icu::UnicodeString& input) {
    icu::UnicodeString out;
    bool pending_space = false;
    for (std::int32_t i = 0; i < input.length();) {
        const UChar32 c = input.char32At(i);
        i += U16_LENGTH(c);
        if (u_isUWhiteSpace(c)) {
            pending_space = out.length() > 0;
            continue;
        }
        if (pending_space) {
            out.append(static_cast<UChar>(u' '));
            pending_space = false;
        }
        out.append(c);
    }
    return out;
}

} // namespace detail

} // namespace unicode

/// Canonical text form used everywhere before comparison: case folded,
/// compatibility normalized, diacritics removed (á→a, ñ→n), whitespace runs
/// collapsed to one ASCII space and trimmed.
///
/// The fold/collapse step is iterated to a fixed point so the result is
/// idempotent even for the few code points whose folding exposes new marks.
inline std::string normalize_text(std::string_view raw) {
    icu::UnicodeString current = icu::UnicodeString::fromUTF8(
        icu::StringPiece(raw.data(), static_cast<std::int32_t>(raw.size())));
    for (int round = 0; round < 8; ++round) {
        icu::UnicodeString next =
            unicode::detail::collapse_whitespace(unicode::detail::fold_once(current));
        if (next == current) {
            break;
        }
        current = std::move(next);
    }
    std::string out;
    current.toUTF8String(out);
    return out;
}

} // namespace plansim
