#pragma once

#include "graphreason/sampler.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace graphreason {

enum class Metric { edit, jaccard, tfidf, embed };

std::string_view metric_name(Metric m);

/// Lowercased alphanumeric runs. Bytes >= 0x80 count as alphanumeric so
/// UTF-8 words stay whole.
std::vector<std::string> tokenize(std::string_view text);

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) = 0;
};

/// Deterministic feature hashing of unigrams and bigrams into `dim` buckets,
/// L2-normalized. Needs no network.
class HashingEmbedder : public EmbeddingProvider {
public:
    explicit HashingEmbedder(std::size_t dim = 256) : dim_(dim) {}
    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;

private:
    std::size_t dim_;
};

namespace detail {
class JsonClient;
}

/// OpenAI-compatible /embeddings client; options.model names the embedding model.
class HttpEmbedder : public EmbeddingProvider {
public:
    explicit HttpEmbedder(HttpOptions options);
    ~HttpEmbedder() override;
    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;

private:
    HttpOptions options_;
    std::unique_ptr<detail::JsonClient> client_;
};

double edit_similarity(std::string_view a, std::string_view b);
double jaccard_similarity(std::string_view a, std::string_view b);
double cosine(const std::vector<double>& a, const std::vector<double>& b);

/// TF-IDF vectors over a fixed corpus with idf = ln((1+N)/(1+df)) + 1.
class TfidfModel {
public:
    explicit TfidfModel(const std::vector<std::string>& corpus);
    std::vector<double> vectorize(std::string_view text) const;
    double similarity(std::string_view a, std::string_view b) const;

private:
    std::map<std::string, std::size_t> vocab_;
    std::vector<double> idf_;
};

/// Pairwise similarity in [0, 1]. tfidf uses {a, b} as its corpus; embed
/// needs a provider and maps cosine to (1 + cos) / 2. Identical texts score 1.
double similarity(std::string_view a, std::string_view b, Metric metric, EmbeddingProvider* provider = nullptr);

/// Similarities among one problem's candidate texts, computed once.
class SimilarityTable {
public:
    SimilarityTable(const std::vector<std::string>& texts, EmbeddingProvider* provider);
    double at(Metric metric, std::size_t i, std::size_t j) const;
    bool has(Metric metric) const;
    const std::vector<std::vector<double>>& embeddings() const { return embeddings_; }

private:
    std::size_t n_;
    std::map<Metric, std::vector<double>> values_;
    std::vector<std::vector<double>> embeddings_;
};

struct KMeansResult {
    std::vector<std::size_t> labels;
    std::vector<std::vector<double>> centroids;
};

/// Seeded Lloyd iterations from a k-means++ start. k is clamped to the point count.
KMeansResult kmeans(const std::vector<std::vector<double>>& points, std::size_t k, std::uint64_t seed,
                    std::size_t max_iterations = 100);

/// Index of the longest text; ties go to the lexicographically smallest.
std::size_t anchor_index(const std::vector<std::string>& texts);

struct DiverseSelection {
    std::vector<std::size_t> chosen;   // indices into the input, anchor first
    std::size_t anchor = 0;
    // strategy name ("edit", "jaccard", "tfidf", "embed", "kmeans") -> nominated indices
    std::map<std::string, std::vector<std::size_t>> nominations;
};

/// Anchor plus, per metric, the candidate least similar to the anchor, plus
/// the medoid of each k-means cluster (k = min(5, n)) when a provider is set.
/// Duplicate texts count once; the result keeps the anchor and is cut to `cap`.
DiverseSelection select_diverse(const std::vector<std::string>& correct_paths, std::size_t cap,
                                EmbeddingProvider* provider, std::uint64_t seed = 0);

struct DispreferredChoice {
    std::size_t index = 0;                      // into the incorrect set
    std::map<std::string, std::size_t> votes;   // metric -> nominated index
};

/// The incorrect path closest to the anchor by majority vote over edit,
/// jaccard, tfidf and (with a provider) embed. Ties: more votes, then longer
/// text, then lexicographically smaller. nullopt when `incorrect` is empty.
std::optional<DispreferredChoice> select_dispreferred(const std::string& anchor,
                                                      const std::vector<std::string>& incorrect,
                                                      EmbeddingProvider* provider);

inline constexpr double kDefaultBeta = 0.1;

/// -log sigmoid(beta * ((pw - pl) - (rw - rl))), evaluated as a softplus.
/// Throws Error(invalid_spec) unless beta > 0.
double dpo_loss(double beta, double logp_policy_w, double logp_policy_l, double logp_ref_w, double logp_ref_l);

struct DpoGradient {
    double policy_w = 0, policy_l = 0, ref_w = 0, ref_l = 0;
};

DpoGradient dpo_loss_gradient(double beta, double logp_policy_w, double logp_policy_l, double logp_ref_w,
                              double logp_ref_l);

} // namespace graphreason
