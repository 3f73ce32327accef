#pragma once

#include <string>
#include <string_view>

namespace codedet {

enum class Language {
    Python,
    Cpp,
    Java,
    JavaScript,
    Go,
    Php,
    CSharp,
    C,
    Unknown,
};

std::string_view to_string(Language lang);

// Parses dataset tags ("Python", "C++", "cpp", "C#", "js", ...). Anything
// unrecognized maps to Unknown.
Language language_from_string(std::string_view tag);

// Rule-based detection: weighted keyword/pattern scores per language, winner
// takes all. Returns Unknown when the best language matches fewer than two
// rules. Deterministic and insensitive to trailing whitespace.
Language detect_language(std::string_view text);

}  // namespace codedet
