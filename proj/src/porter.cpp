// Porter (1980) "An algorithm for suffix stripping", original rule set.
//
// Each step is a rule list scanned in order; the first rule whose suffix
// matches decides the step, whether or not its condition holds.

#include <string>
#include <string_view>

#include "geoglove/corpus.hpp"

namespace geoglove {

namespace {

bool is_vowel_letter(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

// y is a consonant at the start of a word or after a vowel, a vowel after a consonant.
bool is_consonant(std::string_view w, std::size_t i) {
    if (is_vowel_letter(w[i])) return false;
    if (w[i] != 'y') return true;
    return i == 0 ? true : !is_consonant(w, i - 1);
}

// m in [C](VC){m}[V].
int measure(std::string_view w) {
    int m = 0;
    bool prev_vowel = false;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const bool cons = is_consonant(w, i);
        if (cons && prev_vowel) ++m;
        prev_vowel = !cons;
    }
    return m;
}

bool contains_vowel(std::string_view w) {
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!is_consonant(w, i)) return true;
    return false;
}

bool ends_double_consonant(std::string_view w) {
    const auto n = w.size();
    return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o: ends consonant-vowel-consonant, the final consonant not w, x or y.
bool ends_cvc(std::string_view w) {
    const auto n = w.size();
    if (n < 3) return false;
    if (!is_consonant(w, n - 3) || is_consonant(w, n - 2) || !is_consonant(w, n - 1)) return false;
    const char c = w[n - 1];
    return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(std::string_view w, std::string_view suffix) {
    return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

enum class Cond { None, MGt0, MGt1, MGt1AndSorT, ContainsVowel };

struct Rule {
    std::string_view suffix;
    std::string_view replacement;
    Cond cond;
};

bool holds(Cond c, std::string_view stem) {
    switch (c) {
        case Cond::None: return true;
        case Cond::MGt0: return measure(stem) > 0;
        case Cond::MGt1: return measure(stem) > 1;
        case Cond::MGt1AndSorT:
            return measure(stem) > 1 && !stem.empty() && (stem.back() == 's' || stem.back() == 't');
        case Cond::ContainsVowel: return contains_vowel(stem);
    }
    return false;
}

template <std::size_t N>
void apply_rules(std::string& w, const Rule (&rules)[N]) {
    for (const auto& r : rules) {
        if (!ends_with(w, r.suffix)) continue;
        std::string_view stem(w.data(), w.size() - r.suffix.size());
        if (holds(r.cond, stem)) w = std::string(stem) + std::string(r.replacement);
        return;
    }
}

void step1a(std::string& w) {
    static constexpr Rule rules[] = {
        {"sses", "ss", Cond::None}, {"ies", "i", Cond::None}, {"ss", "ss", Cond::None}, {"s", "", Cond::None}};
    apply_rules(w, rules);
}

void step1b(std::string& w) {
    if (ends_with(w, "eed")) {
        if (measure(std::string_view(w).substr(0, w.size() - 3)) > 0) w.pop_back();
        return;
    }
    std::size_t cut = 0;
    if (ends_with(w, "ed"))
        cut = 2;
    else if (ends_with(w, "ing"))
        cut = 3;
    if (!cut || !contains_vowel(std::string_view(w).substr(0, w.size() - cut))) return;
    w.resize(w.size() - cut);

    if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
        w += 'e';
    } else if (ends_double_consonant(w)) {
        const char c = w.back();
        if (c != 'l' && c != 's' && c != 'z') w.pop_back();
    } else if (measure(w) == 1 && ends_cvc(w)) {
        w += 'e';
    }
}

void step1c(std::string& w) {
    static constexpr Rule rules[] = {{"y", "i", Cond::ContainsVowel}};
    apply_rules(w, rules);
}

void step2(std::string& w) {
    static constexpr Rule rules[] = {
        {"ational", "ate", Cond::MGt0}, {"tional", "tion", Cond::MGt0}, {"enci", "ence", Cond::MGt0},
        {"anci", "ance", Cond::MGt0},   {"izer", "ize", Cond::MGt0},    {"abli", "able", Cond::MGt0},
        {"alli", "al", Cond::MGt0},     {"entli", "ent", Cond::MGt0},   {"eli", "e", Cond::MGt0},
        {"ousli", "ous", Cond::MGt0},   {"ization", "ize", Cond::MGt0}, {"ation", "ate", Cond::MGt0},
        {"ator", "ate", Cond::MGt0},    {"alism", "al", Cond::MGt0},    {"iveness", "ive", Cond::MGt0},
        {"fulness", "ful", Cond::MGt0}, {"ousness", "ous", Cond::MGt0}, {"aliti", "al", Cond::MGt0},
        {"iviti", "ive", Cond::MGt0},   {"biliti", "ble", Cond::MGt0},
    };
    apply_rules(w, rules);
}

void step3(std::string& w) {
    static constexpr Rule rules[] = {
        {"icate", "ic", Cond::MGt0}, {"ative", "", Cond::MGt0}, {"alize", "al", Cond::MGt0},
        {"iciti", "ic", Cond::MGt0}, {"ical", "ic", Cond::MGt0}, {"ful", "", Cond::MGt0},
        {"ness", "", Cond::MGt0},
    };
    apply_rules(w, rules);
}

void step4(std::string& w) {
    static constexpr Rule rules[] = {
        {"al", "", Cond::MGt1},   {"ance", "", Cond::MGt1}, {"ence", "", Cond::MGt1},
        {"er", "", Cond::MGt1},   {"ic", "", Cond::MGt1},   {"able", "", Cond::MGt1},
        {"ible", "", Cond::MGt1}, {"ant", "", Cond::MGt1},  {"ement", "", Cond::MGt1},
        {"ment", "", Cond::MGt1}, {"ent", "", Cond::MGt1},  {"ion", "", Cond::MGt1AndSorT},
        {"ou", "", Cond::MGt1},   {"ism", "", Cond::MGt1},  {"ate", "", Cond::MGt1},
        {"iti", "", Cond::MGt1},  {"ous", "", Cond::MGt1},  {"ive", "", Cond::MGt1},
        {"ize", "", Cond::MGt1},
    };
    apply_rules(w, rules);
}

void step5a(std::string& w) {
    if (!ends_with(w, "e")) return;
    std::string_view stem(w.data(), w.size() - 1);
    const int m = measure(stem);
    if (m > 1 || (m == 1 && !ends_cvc(stem))) w.pop_back();
}

void step5b(std::string& w) {
    if (ends_with(w, "ll") && measure(w) > 1) w.pop_back();
}

}  // namespace

std::string porter_stem(std::string_view word) {
    std::string w(word);
    if (w.empty()) return w;
    step1a(w);
    step1b(w);
    step1c(w);
    step2(w);
    step3(w);
    step4(w);
    step5a(w);
    step5b(w);
    return w;
}

}  // namespace geoglove
