#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace twelect {

// UTF-8 lowercasing covering ASCII, Latin-1 supplement and Latin Extended-A
// (enough for Spanish; accents are preserved, not stripped). Other code
// points pass through unchanged.
std::string lower_utf8(std::string_view text);

// Removes http(s)://... and www.... runs up to the next whitespace.
std::string strip_urls(std::string_view text);

// Tweet tokenizer: URLs removed, text lowercased, punctuation acts as a
// separator, diacritics preserved. '#' and '@' glue to the following word so
// hashtags and mentions survive as single tokens.
std::vector<std::string> tokenize(std::string_view text);

// tokenize() plus space-joined n-grams of orders 2..n appended in position
// order. n <= 1 is plain tokenize().
std::vector<std::string> tokenize_ngrams(std::string_view text, int n);

}  // namespace twelect
