#include "entangle/porter_stemmer.hpp"

#include <array>
#include <functional>

namespace entangle {
namespace {

bool is_consonant(std::string_view w, std::size_t i) {
    switch (w[i]) {
        case 'a': case 'e': case 'i': case 'o': case 'u':
            return false;
        case 'y':
            return i == 0 ? true : !is_consonant(w, i - 1);
        default:
            return true;
    }
}

// m in [C](VC)^m[V]
int measure(std::string_view stem) {
    int m = 0;
    bool prev_vowel = false;
    for (std::size_t i = 0; i < stem.size(); ++i) {
        const bool cons = is_consonant(stem, i);
        if (cons && prev_vowel) ++m;
        prev_vowel = !cons;
    }
    return m;
}

bool contains_vowel(std::string_view stem) {
    for (std::size_t i = 0; i < stem.size(); ++i)
        if (!is_consonant(stem, i)) return true;
    return false;
}

bool ends_double_consonant(std::string_view w) {
    const auto n = w.size();
    return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o: stem ends cvc, where the final c is not w, x or y.
bool ends_cvc(std::string_view w) {
    const auto n = w.size();
    if (n < 3) return false;
    if (!is_consonant(w, n - 3) || is_consonant(w, n - 2) || !is_consonant(w, n - 1))
        return false;
    const char last = w[n - 1];
    return last != 'w' && last != 'x' && last != 'y';
}

bool ends_with(std::string_view w, std::string_view suffix) {
    return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

using Condition = bool (*)(std::string_view);

struct Rule {
    std::string_view suffix;
    std::string_view replacement;
    Condition condition;
};

bool m_gt_0(std::string_view s) { return measure(s) > 0; }
bool m_gt_1(std::string_view s) { return measure(s) > 1; }
bool m_gt_1_st(std::string_view s) {
    return measure(s) > 1 && !s.empty() && (s.back() == 's' || s.back() == 't');
}

// The first rule whose suffix matches decides the step, whether or not its
// condition holds. Rule lists are ordered so the longest suffix comes first.
template <std::size_t N>
void apply_rules(std::string& w, const std::array<Rule, N>& rules) {
    for (const auto& r : rules) {
        if (!ends_with(w, r.suffix)) continue;
        const std::string_view stem(w.data(), w.size() - r.suffix.size());
        if (r.condition == nullptr || r.condition(stem)) {
            w.resize(stem.size());
            w.append(r.replacement);
        }
        return;
    }
}

void step1a(std::string& w) {
    static constexpr std::array<Rule, 4> rules{{
        {"sses", "ss", nullptr},
        {"ies", "i", nullptr},
        {"ss", "ss", nullptr},
        {"s", "", nullptr},
    }};
    apply_rules(w, rules);
}

void step1b(std::string& w) {
    if (ends_with(w, "eed")) {
        if (measure(std::string_view(w).substr(0, w.size() - 3)) > 0) w.pop_back();
        return;
    }
    bool stripped = false;
    for (std::string_view suffix : {std::string_view("ed"), std::string_view("ing")}) {
        if (!ends_with(w, suffix)) continue;
        if (contains_vowel(std::string_view(w).substr(0, w.size() - suffix.size()))) {
            w.resize(w.size() - suffix.size());
            stripped = true;
        }
        break;
    }
    if (!stripped) return;

    if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
        w.push_back('e');
    } else if (ends_double_consonant(w)) {
        const char last = w.back();
        if (last != 'l' && last != 's' && last != 'z') w.pop_back();
    } else if (measure(w) == 1 && ends_cvc(w)) {
        w.push_back('e');
    }
}

void step1c(std::string& w) {
    if (ends_with(w, "y") && contains_vowel(std::string_view(w).substr(0, w.size() - 1)))
        w.back() = 'i';
}

void step2(std::string& w) {
    static constexpr std::array<Rule, 20> rules{{
        {"ational", "ate", m_gt_0},
        {"tional", "tion", m_gt_0},
        {"enci", "ence", m_gt_0},
        {"anci", "ance", m_gt_0},
        {"izer", "ize", m_gt_0},
        {"abli", "able", m_gt_0},
        {"alli", "al", m_gt_0},
        {"entli", "ent", m_gt_0},
        {"eli", "e", m_gt_0},
        {"ousli", "ous", m_gt_0},
        {"ization", "ize", m_gt_0},
        {"ation", "ate", m_gt_0},
        {"ator", "ate", m_gt_0},
        {"alism", "al", m_gt_0},
        {"iveness", "ive", m_gt_0},
        {"fulness", "ful", m_gt_0},
        {"ousness", "ous", m_gt_0},
        {"aliti", "al", m_gt_0},
        {"iviti", "ive", m_gt_0},
        {"biliti", "ble", m_gt_0},
    }};
    apply_rules(w, rules);
}

void step3(std::string& w) {
    static constexpr std::array<Rule, 7> rules{{
        {"icate", "ic", m_gt_0},
        {"ative", "", m_gt_0},
        {"alize", "al", m_gt_0},
        {"iciti", "ic", m_gt_0},
        {"ical", "ic", m_gt_0},
        {"ful", "", m_gt_0},
        {"ness", "", m_gt_0},
    }};
    apply_rules(w, rules);
}

void step4(std::string& w) {
    static constexpr std::array<Rule, 19> rules{{
        {"al", "", m_gt_1},   {"ance", "", m_gt_1}, {"ence", "", m_gt_1},
        {"er", "", m_gt_1},   {"ic", "", m_gt_1},   {"able", "", m_gt_1},
        {"ible", "", m_gt_1}, {"ant", "", m_gt_1},  {"ement", "", m_gt_1},
        {"ment", "", m_gt_1}, {"ent", "", m_gt_1},  {"ion", "", m_gt_1_st},
        {"ou", "", m_gt_1},   {"ism", "", m_gt_1},  {"ate", "", m_gt_1},
        {"iti", "", m_gt_1},  {"ous", "", m_gt_1},  {"ive", "", m_gt_1},
        {"ize", "", m_gt_1},
    }};
    apply_rules(w, rules);
}

void step5a(std::string& w) {
    if (!ends_with(w, "e")) return;
    const std::string_view stem(w.data(), w.size() - 1);
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

}  // namespace entangle
