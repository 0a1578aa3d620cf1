#pragma once

// Reference similarity measures and nomination rules, written from the
// definitions rather than shared with the selector.

#include "graphreason/selector.hpp"

#include <map>
#include <string>
#include <vector>

namespace oracle {

std::vector<std::string> words(const std::string& text);

double edit_sim(const std::string& a, const std::string& b);
double jaccard_sim(const std::string& a, const std::string& b);
/// TF-IDF cosine with the idf table built from `corpus`.
double tfidf_sim(const std::vector<std::string>& corpus, const std::string& a, const std::string& b);
double embed_sim(const std::vector<double>& a, const std::vector<double>& b);

/// sims[metric][i][j] for every pair, metrics "edit", "jaccard", "tfidf" and,
/// when embeddings are given, "embed".
using Matrix = std::vector<std::vector<double>>;
std::map<std::string, Matrix> all_pairs(const std::vector<std::string>& texts,
                                        const std::vector<std::vector<double>>* embeddings);

inline constexpr double kTieTolerance = 1e-9;

/// Candidates j != anchor whose similarity to the anchor is within the tie
/// tolerance of the minimum (or maximum).
std::vector<std::size_t> extreme_set(const Matrix& m, std::size_t anchor, bool minimum);

} // namespace oracle
