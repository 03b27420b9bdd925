#include "dataless/text.hpp"

#include "dataless/error.hpp"

namespace dataless {

namespace {

constexpr char32_t kInvalid = 0xFFFFFFFF;

// Decodes one code point starting at `pos` and advances it. Returns kInvalid on a
// malformed sequence (one byte consumed).
char32_t decode_utf8(std::string_view s, std::size_t& pos) {
    const auto b0 = static_cast<unsigned char>(s[pos]);
    if (b0 < 0x80) {
        ++pos;
        return b0;
    }
    std::size_t len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
        min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
        min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
        min = 0x10000;
    } else {
        ++pos;
        return kInvalid;
    }
    if (pos + len > s.size()) {
        ++pos;
        return kInvalid;
    }
    for (std::size_t i = 1; i < len; ++i) {
        const auto b = static_cast<unsigned char>(s[pos + i]);
        if ((b & 0xC0) != 0x80) {
            ++pos;
            return kInvalid;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        ++pos;
        return kInvalid;
    }
    pos += len;
    return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool in(char32_t cp, char32_t lo, char32_t hi) { return cp >= lo && cp <= hi; }

bool is_whitespace(char32_t cp) {
    return in(cp, 0x09, 0x0D) || cp == 0x20 || cp == 0x85 || cp == 0xA0 || cp == 0x1680 ||
           in(cp, 0x2000, 0x200B) || cp == 0x2028 || cp == 0x2029 || cp == 0x202F ||
           cp == 0x205F || cp == 0x3000 || cp == 0xFEFF;
}

bool is_punct_or_symbol(char32_t cp) {
    if (cp < 0x80) {
        return cp < 0x20 || cp == 0x7F || in(cp, 0x21, 0x2F) || in(cp, 0x3A, 0x40) ||
               in(cp, 0x5B, 0x60) || in(cp, 0x7B, 0x7E);
    }
    if (in(cp, 0x80, 0x9F)) return true;  // C1 controls
    if (in(cp, 0xA1, 0xBF)) {
        // ª µ º and the superscript digits are word characters.
        return cp != 0xAA && cp != 0xB2 && cp != 0xB3 && cp != 0xB5 && cp != 0xB9 && cp != 0xBA &&
               !in(cp, 0xBC, 0xBE);
    }
    return cp == 0xD7 || cp == 0xF7 || cp == 0x037E || cp == 0x0387 || in(cp, 0x055A, 0x055F) ||
           cp == 0x0589 || cp == 0x05BE || cp == 0x05C0 || cp == 0x05C3 || cp == 0x05C6 ||
           cp == 0x05F3 || cp == 0x05F4 || cp == 0x060C || cp == 0x060D || cp == 0x061B ||
           cp == 0x061E || cp == 0x061F || in(cp, 0x066A, 0x066D) || cp == 0x06D4 ||
           cp == 0x0964 || cp == 0x0965 || in(cp, 0x1361, 0x1368) || in(cp, 0x2010, 0x2027) ||
           in(cp, 0x2030, 0x205E) || in(cp, 0x20A0, 0x20CF) || in(cp, 0x2190, 0x23FF) ||
           in(cp, 0x2500, 0x27BF) || in(cp, 0x2E00, 0x2E7F) || in(cp, 0x3001, 0x303F) ||
           in(cp, 0xFF01, 0xFF0F) || in(cp, 0xFF1A, 0xFF20) || in(cp, 0xFF3B, 0xFF40) ||
           in(cp, 0xFF5B, 0xFF65);
}

// Upper-case letter of an (upper, lower) pair laid out at even/odd or odd/even offsets.
char32_t fold_pair(char32_t cp, bool upper_is_even) {
    const bool even = (cp % 2) == 0;
    return even == upper_is_even ? cp + 1 : cp;
}

char32_t lower(char32_t cp) {
    if (cp < 0x80) return in(cp, 'A', 'Z') ? cp + 0x20 : cp;
    if (in(cp, 0xC0, 0xDE) && cp != 0xD7) return cp + 0x20;
    if (in(cp, 0x0100, 0x017F)) {
        if (cp == 0x0130) return 'i';
        if (cp == 0x0131 || cp == 0x0138 || cp == 0x0149 || cp == 0x017F) return cp;
        if (cp == 0x0178) return 0xFF;
        if (cp <= 0x0137 || in(cp, 0x014A, 0x0177)) return fold_pair(cp, true);
        return fold_pair(cp, false);
    }
    if (in(cp, 0x01CD, 0x01DC)) return fold_pair(cp, false);
    if (in(cp, 0x01DE, 0x01EF) || in(cp, 0x01F8, 0x021F) || in(cp, 0x0222, 0x0233))
        return fold_pair(cp, true);
    if (in(cp, 0x0391, 0x03AB) && cp != 0x03A2) return cp + 0x20;
    if (cp == 0x0386) return 0x03AC;
    if (in(cp, 0x0388, 0x038A)) return cp + 0x25;
    if (cp == 0x038C) return 0x03CC;
    if (cp == 0x038E || cp == 0x038F) return cp + 0x3F;
    if (in(cp, 0x0400, 0x040F)) return cp + 0x50;
    if (in(cp, 0x0410, 0x042F)) return cp + 0x20;
    if (in(cp, 0x0460, 0x0481) || in(cp, 0x048A, 0x04BF) || in(cp, 0x04D0, 0x052F))
        return fold_pair(cp, true);
    if (cp == 0x04C0) return 0x04CF;
    if (in(cp, 0x04C1, 0x04CE)) return fold_pair(cp, false);
    if (in(cp, 0x0531, 0x0556)) return cp + 0x30;
    if (cp == 0x1E9E) return 0xDF;
    if (in(cp, 0x1E00, 0x1E95) || in(cp, 0x1EA0, 0x1EFF)) return fold_pair(cp, true);
    if (in(cp, 0xFF21, 0xFF3A)) return cp + 0x20;
    return cp;
}

}  // namespace

LanguageCode::LanguageCode(std::string code) : code_(std::move(code)) {
    if (code_.empty()) throw_validation("language code must not be empty");
    for (const char c : code_) {
        const auto u = static_cast<unsigned char>(c);
        if (u <= 0x20 || u == 0x7F) throw_validation("language code '" + code_ + "' contains whitespace");
        if (c >= 'A' && c <= 'Z') throw_validation("language code '" + code_ + "' is not lowercase");
    }
    if (to_lower(code_) != code_) throw_validation("language code '" + code_ + "' is not lowercase");
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const char32_t cp = decode_utf8(text, pos);
        if (cp == kInvalid || is_whitespace(cp) || is_punct_or_symbol(cp)) {
            if (!current.empty()) {
                tokens.push_back(std::move(current));
                current.clear();
            }
            continue;
        }
        encode_utf8(lower(cp), current);
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::string to_lower(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t start = pos;
        const char32_t cp = decode_utf8(text, pos);
        if (cp == kInvalid) {
            out.append(text.substr(start, pos - start));
            continue;
        }
        encode_utf8(lower(cp), out);
    }
    return out;
}

std::string join(const std::vector<std::string>& tokens, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.append(sep);
        out.append(tokens[i]);
    }
    return out;
}

}  // namespace dataless
