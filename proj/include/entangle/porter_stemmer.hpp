#pragma once

#include <string>
#include <string_view>

namespace entangle {

/// Suffix stripper implementing the original 1980 Porter algorithm
/// (steps 1a through 5b, no later revisions).
///
/// Input is expected to be a lowercase ASCII word; other bytes are treated
/// as consonants. Words of any length are processed, so "as" becomes "a".
std::string porter_stem(std::string_view word);

}  // namespace entangle
