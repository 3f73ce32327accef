#include "codedet/langid.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <vector>

namespace codedet {

std::string_view to_string(Language lang) {
    switch (lang) {
        case Language::Python: return "Python";
        case Language::Cpp: return "C++";
        case Language::Java: return "Java";
        case Language::JavaScript: return "JavaScript";
        case Language::Go: return "Go";
        case Language::Php: return "PHP";
        case Language::CSharp: return "C#";
        case Language::C: return "C";
        case Language::Unknown: return "Unknown";
    }
    return "Unknown";
}

Language language_from_string(std::string_view tag) {
    std::string lower;
    lower.reserve(tag.size());
    for (char c : tag) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

    if (lower == "python" || lower == "py") return Language::Python;
    if (lower == "c++" || lower == "cpp" || lower == "cplusplus") return Language::Cpp;
    if (lower == "java") return Language::Java;
    if (lower == "javascript" || lower == "js" || lower == "node") return Language::JavaScript;
    if (lower == "go" || lower == "golang") return Language::Go;
    if (lower == "php") return Language::Php;
    if (lower == "c#" || lower == "csharp" || lower == "cs") return Language::CSharp;
    if (lower == "c") return Language::C;
    return Language::Unknown;
}

namespace {

bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool contains(std::string_view text, std::string_view needle) {
    return text.find(needle) != std::string_view::npos;
}

bool contains_word(std::string_view text, std::string_view word) {
    std::size_t pos = 0;
    while ((pos = text.find(word, pos)) != std::string_view::npos) {
        const bool left_ok = pos == 0 || !word_char(text[pos - 1]);
        const std::size_t end = pos + word.size();
        const bool right_ok = end == text.size() || !word_char(text[end]);
        if (left_ok && right_ok) return true;
        pos += 1;
    }
    return false;
}

struct LineView {
    std::string_view trimmed;  // leading and trailing whitespace removed
};

std::vector<LineView> split_trimmed_lines(std::string_view text) {
    std::vector<LineView> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            std::string_view line = text.substr(start, i - start);
            std::size_t b = 0;
            while (b < line.size() && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
            std::size_t e = line.size();
            while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
            lines.push_back({line.substr(b, e - b)});
            start = i + 1;
        }
    }
    return lines;
}

struct Doc {
    std::string_view text;
    std::vector<LineView> lines;

    bool any_line(bool (*pred)(std::string_view)) const {
        return std::any_of(lines.begin(), lines.end(),
                           [&](const LineView& l) { return pred(l.trimmed); });
    }
};

bool line_starts(std::string_view line, std::string_view prefix) {
    return line.substr(0, prefix.size()) == prefix;
}

struct Rule {
    Language lang;
    double weight;
    bool (*match)(const Doc&);
};

// One table entry per signal; a language wins on total weight but must hit
// at least two rules to count as confident.
const std::vector<Rule>& rule_table() {
    static const std::vector<Rule> rules = {
        // Python
        {Language::Python, 3.0,
         [](const Doc& d) {
             return d.any_line([](std::string_view l) {
                 return line_starts(l, "def ") && l.find(':') != std::string_view::npos;
             });
         }},
        {Language::Python, 2.0, [](const Doc& d) { return contains(d.text, "):"); }},
        {Language::Python, 2.0, [](const Doc& d) { return contains_word(d.text, "self"); }},
        {Language::Python, 3.0, [](const Doc& d) { return contains_word(d.text, "elif"); }},
        {Language::Python, 2.0,
         [](const Doc& d) {
             return d.any_line([](std::string_view l) {
                 return (line_starts(l, "import ") || line_starts(l, "from ")) &&
                        l.find(';') == std::string_view::npos;
             });
         }},
        {Language::Python, 1.0,
         [](const Doc& d) {
             return contains_word(d.text, "None") || contains_word(d.text, "True") ||
                    contains_word(d.text, "False");
         }},
        {Language::Python, 3.0,
         [](const Doc& d) {
             return contains(d.text, "__init__") || contains(d.text, "__name__");
         }},
        {Language::Python, 2.0,
         [](const Doc& d) {
             return d.any_line([](std::string_view l) {
                 return line_starts(l, "class ") && !l.empty() && l.back() == ':';
             });
         }},
        {Language::Python, 2.0, [](const Doc& d) { return contains_word(d.text, "lambda"); }},
        {Language::Python, 1.0, [](const Doc& d) { return contains(d.text, "print("); }},

        // C++
        {Language::Cpp, 1.5,
         [](const Doc& d) {
             return contains(d.text, "#include <") || contains(d.text, "#include \"");
         }},
        {Language::Cpp, 3.0, [](const Doc& d) { return contains(d.text, "std::"); }},
        {Language::Cpp, 2.0, [](const Doc& d) { return contains_word(d.text, "template"); }},
        {Language::Cpp, 2.5,
         [](const Doc& d) {
             return contains_word(d.text, "cout") || contains_word(d.text, "cerr");
         }},
        {Language::Cpp, 2.5, [](const Doc& d) { return contains(d.text, "using namespace"); }},
        {Language::Cpp, 2.5,
         [](const Doc& d) {
             return contains(d.text, "public:") || contains(d.text, "private:") ||
                    contains(d.text, "protected:");
         }},
        {Language::Cpp, 1.0, [](const Doc& d) { return contains(d.text, "::"); }},
        {Language::Cpp, 2.5, [](const Doc& d) { return contains_word(d.text, "nullptr"); }},
        {Language::Cpp, 2.0, [](const Doc& d) { return contains(d.text, "vector<"); }},
        {Language::Cpp, 1.0, [](const Doc& d) { return contains(d.text, "int main("); }},

        // Java
        {Language::Java, 2.5, [](const Doc& d) { return contains(d.text, "public class"); }},
        {Language::Java, 3.0, [](const Doc& d) { return contains(d.text, "System.out"); }},
        {Language::Java, 3.0, [](const Doc& d) { return contains(d.text, "static void main"); }},
        {Language::Java, 3.0, [](const Doc& d) { return contains(d.text, "import java"); }},
        {Language::Java, 2.5,
         [](const Doc& d) {
             return contains(d.text, "@Override") || contains(d.text, "@Test");
         }},
        {Language::Java, 1.5,
         [](const Doc& d) {
             return contains_word(d.text, "extends") || contains_word(d.text, "implements");
         }},
        {Language::Java, 1.0, [](const Doc& d) { return contains(d.text, "String "); }},
        {Language::Java, 2.0,
         [](const Doc& d) {
             return contains(d.text, "ArrayList") || contains(d.text, "HashMap");
         }},
        {Language::Java, 2.0,
         [](const Doc& d) {
             return d.any_line([](std::string_view l) {
                 return line_starts(l, "package ") && !l.empty() && l.back() == ';';
             });
         }},
        {Language::Java, 1.5, [](const Doc& d) { return contains(d.text, "final "); }},

        // JavaScript
        {Language::JavaScript, 2.0, [](const Doc& d) { return contains(d.text, "=>"); }},
        {Language::JavaScript, 3.0, [](const Doc& d) { return contains(d.text, "console."); }},
        {Language::JavaScript, 2.0,
         [](const Doc& d) { return contains_word(d.text, "function"); }},
        {Language::JavaScript, 2.0,
         [](const Doc& d) { return contains(d.text, "===") || contains(d.text, "!=="); }},
        {Language::JavaScript, 1.5,
         [](const Doc& d) {
             return d.any_line([](std::string_view l) {
                 return line_starts(l, "const ") || line_starts(l, "let ");
             });
         }},
        {Language::JavaScript, 1.0, [](const Doc& d) { return contains_word(d.text, "var"); }},
        {Language::JavaScript, 2.0,
         [](const Doc& d) {
             return contains(d.text, "document.") || contains(d.text, "window.");
         }},
        {Language::JavaScript, 3.0,
         [](const Doc& d) {
             return contains(d.text, "module.exports") || contains(d.text, "require(");
         }},
        {Language::JavaScript, 2.0,
         [](const Doc& d) { return contains_word(d.text, "undefined"); }},
        {Language::JavaScript, 2.0,
         [](const Doc& d) {
             return contains(d.text, ".then(") || contains(d.text, "async function") ||
                    contains(d.text, "new Promise");
         }},

        // Go
        {Language::Go, 3.0,
         [](const Doc& d) {
             return d.any_line([](std::string_view l) { return line_starts(l, "func "); });
         }},
        {Language::Go, 3.0, [](const Doc& d) { return contains(d.text, ":="); }},
        {Language::Go, 3.0, [](const Doc& d) { return contains(d.text, "fmt."); }},
        {Language::Go, 2.0,
         [](const Doc& d) {
             return d.any_line([](std::string_view l) {
                 return line_starts(l, "package ") && l.find(';') == std::string_view::npos;
             });
         }},
        {Language::Go, 2.0, [](const Doc& d) { return contains(d.text, "import ("); }},
        {Language::Go, 2.0,
         [](const Doc& d) {
             return contains_word(d.text, "defer") || contains_word(d.text, "chan");
         }},
        {Language::Go, 1.5,
         [](const Doc& d) {
             return contains(d.text, "struct {") || contains(d.text, "interface {");
         }},
        {Language::Go, 1.0, [](const Doc& d) { return contains_word(d.text, "nil"); }},
        {Language::Go, 2.0,
         [](const Doc& d) {
             return contains(d.text, "range ") && contains(d.text, ":=");
         }},
        {Language::Go, 2.0, [](const Doc& d) { return contains(d.text, "go func"); }},

        // PHP
        {Language::Php, 3.0, [](const Doc& d) { return contains(d.text, "<?php"); }},
        {Language::Php, 1.0, [](const Doc& d) { return contains(d.text, "?>"); }},
        {Language::Php, 2.0, [](const Doc& d) { return contains_word(d.text, "echo"); }},
        {Language::Php, 2.0,
         [](const Doc& d) {
             const std::string_view t = d.text;
             for (std::size_t i = 0; i + 1 < t.size(); ++i) {
                 if (t[i] == '$' &&
                     (std::isalpha(static_cast<unsigned char>(t[i + 1])) || t[i + 1] == '_')) {
                     return true;
                 }
             }
             return false;
         }},
        {Language::Php, 3.0, [](const Doc& d) { return contains(d.text, "$this"); }},
        {Language::Php, 1.0, [](const Doc& d) { return contains_word(d.text, "function"); }},
        {Language::Php, 0.5, [](const Doc& d) { return contains_word(d.text, "foreach"); }},
        {Language::Php, 0.5, [](const Doc& d) { return contains(d.text, "->"); }},

        // C#
        {Language::CSharp, 3.0, [](const Doc& d) { return contains(d.text, "using System"); }},
        {Language::CSharp, 3.0, [](const Doc& d) { return contains(d.text, "Console."); }},
        {Language::CSharp, 3.0,
         [](const Doc& d) { return contains(d.text, "static void Main"); }},
        {Language::CSharp, 1.0, [](const Doc& d) { return contains_word(d.text, "namespace"); }},
        {Language::CSharp, 3.0,
         [](const Doc& d) { return contains(d.text, "get;") || contains(d.text, "set;"); }},
        {Language::CSharp, 1.0, [](const Doc& d) { return contains_word(d.text, "foreach"); }},
        {Language::CSharp, 0.5, [](const Doc& d) { return contains(d.text, "string "); }},
        {Language::CSharp, 0.5, [](const Doc& d) { return contains_word(d.text, "var"); }},
        {Language::CSharp, 1.0, [](const Doc& d) { return contains(d.text, "public class"); }},
        {Language::CSharp, 2.0, [](const Doc& d) { return contains(d.text, "async Task"); }},

        // C
        {Language::C, 1.5,
         [](const Doc& d) {
             return contains(d.text, "#include <") || contains(d.text, "#include \"");
         }},
        {Language::C, 2.0, [](const Doc& d) { return contains(d.text, "printf("); }},
        {Language::C, 2.5, [](const Doc& d) { return contains(d.text, "scanf("); }},
        {Language::C, 2.5,
         [](const Doc& d) {
             return contains_word(d.text, "malloc") || contains_word(d.text, "calloc") ||
                    contains_word(d.text, "free");
         }},
        {Language::C, 1.0, [](const Doc& d) { return contains_word(d.text, "struct"); }},
        {Language::C, 2.0, [](const Doc& d) { return contains_word(d.text, "typedef"); }},
        {Language::C, 1.5, [](const Doc& d) { return contains_word(d.text, "NULL"); }},
        {Language::C, 1.5,
         [](const Doc& d) {
             return contains(d.text, "char *") || contains(d.text, "char*");
         }},
        {Language::C, 0.5, [](const Doc& d) { return contains(d.text, "void "); }},
        {Language::C, 1.0, [](const Doc& d) { return contains(d.text, "int main("); }},
    };
    return rules;
}

bool has_cpp_marker(std::string_view text) {
    return contains(text, "std::") || contains_word(text, "template") ||
           contains(text, "class ") || contains(text, "new ");
}

}  // namespace

Language detect_language(std::string_view text) {
    Doc doc{text, split_trimmed_lines(text)};

    constexpr std::size_t kNumLangs = 8;
    std::array<double, kNumLangs> score{};
    std::array<int, kNumLangs> hits{};
    for (const Rule& rule : rule_table()) {
        if (rule.match(doc)) {
            const auto i = static_cast<std::size_t>(rule.lang);
            score[i] += rule.weight;
            hits[i] += 1;
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < kNumLangs; ++i) {
        if (score[i] > score[best]) best = i;
    }
    if (score[best] <= 0.0 || hits[best] < 2) return Language::Unknown;

    auto winner = static_cast<Language>(best);
    // C vs C++ tie-break: any of {std::, template, class, new} selects C++.
    const double c_score = score[static_cast<std::size_t>(Language::C)];
    const double cpp_score = score[static_cast<std::size_t>(Language::Cpp)];
    if (winner == Language::C && has_cpp_marker(text)) {
        winner = Language::Cpp;
    } else if (winner == Language::Cpp && cpp_score == c_score && !has_cpp_marker(text)) {
        winner = Language::C;
    }
    return winner;
}

}  // namespace codedet
