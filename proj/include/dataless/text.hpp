#pragma once

#include <compare>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace dataless {

/// Language tag such as "en", "ha" or "uz". Always non-empty, lowercase, whitespace-free.
class LanguageCode {
public:
    LanguageCode() = default;

    /// Throws a validation error when `code` violates the tag rules.
    explicit LanguageCode(std::string code);

    const std::string& str() const noexcept { return code_; }
    bool empty() const noexcept { return code_.empty(); }

    auto operator<=>(const LanguageCode&) const = default;

private:
    std::string code_;
};

/// Splits on Unicode whitespace and punctuation, lowercases, drops empty tokens.
///
/// Case folding covers Latin, Greek, Cyrillic and Armenian. Invalid UTF-8 bytes act
/// as separators. Scripts written without spaces between words come out as one token
/// per whitespace-delimited run.
std::vector<std::string> tokenize(std::string_view text);

/// Lowercases a UTF-8 string with the same case map `tokenize` uses.
std::string to_lower(std::string_view text);

std::string join(const std::vector<std::string>& tokens, std::string_view sep = " ");

}  // namespace dataless

template <>
struct std::hash<dataless::LanguageCode> {
    std::size_t operator()(const dataless::LanguageCode& c) const noexcept {
        return std::hash<std::string>{}(c.str());
    }
};
