#include "graphreason/selector.hpp"

#include "graphreason/error.hpp"
#include "graphreason/rng.hpp"

#include "json_client.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

namespace graphreason {

namespace {

bool token_char(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
    return d;
}

constexpr std::array<Metric, 4> kMetrics = {Metric::edit, Metric::jaccard, Metric::tfidf, Metric::embed};

} // namespace

std::string_view metric_name(Metric m) {
    switch (m) {
    case Metric::edit: return "edit";
    case Metric::jaccard: return "jaccard";
    case Metric::tfidf: return "tfidf";
    case Metric::embed: return "embed";
    }
    return "";
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char c : text) {
        if (token_char(c)) {
            cur += static_cast<char>(c < 0x80 ? std::tolower(c) : c);
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::vector<std::vector<double>> HashingEmbedder::embed(const std::vector<std::string>& texts) {
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        std::vector<double> v(dim_, 0.0);
        const auto tokens = tokenize(text);
        auto add = [&](std::string_view feature) {
            const std::uint64_t h = mix64(fnv1a(feature));
            v[h % dim_] += (h >> 63) ? 1.0 : -1.0;
        };
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            add(tokens[i]);
            if (i + 1 < tokens.size()) add(tokens[i] + " " + tokens[i + 1]);
        }
        double norm = 0;
        for (double x : v) norm += x * x;
        if (norm > 0) {
            norm = std::sqrt(norm);
            for (double& x : v) x /= norm;
        }
        out.push_back(std::move(v));
    }
    return out;
}

HttpEmbedder::HttpEmbedder(HttpOptions options)
    : options_(std::move(options)), client_(std::make_unique<detail::JsonClient>(options_)) {}

HttpEmbedder::~HttpEmbedder() = default;

std::vector<std::vector<double>> HttpEmbedder::embed(const std::vector<std::string>& texts) {
    if (texts.empty()) return {};
    const auto reply = client_->post({{"model", options_.model}, {"input", texts}});
    if (!reply.contains("data") || !reply["data"].is_array() || reply["data"].size() != texts.size()) {
        throw BackendError(200, "embedding response does not hold one vector per input");
    }
    std::vector<std::vector<double>> out(texts.size());
    for (const auto& item : reply["data"]) {
        const auto index = item.value("index", std::size_t{0});
        if (index >= out.size()) {
            throw BackendError(200, "embedding response index out of range");
        }
        out[index] = item.at("embedding").get<std::vector<double>>();
    }
    return out;
}

double edit_similarity(std::string_view a, std::string_view b) {
    const auto x = tokenize(a), y = tokenize(b);
    if (x.empty() && y.empty()) return 1.0;
    std::vector<std::size_t> prev(y.size() + 1), cur(y.size() + 1);
    for (std::size_t j = 0; j <= y.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= x.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= y.size(); ++j) {
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1)});
        }
        std::swap(prev, cur);
    }
    return 1.0 - static_cast<double>(prev[y.size()]) / static_cast<double>(std::max(x.size(), y.size()));
}

double jaccard_similarity(std::string_view a, std::string_view b) {
    const auto ta = tokenize(a), tb = tokenize(b);
    const std::set<std::string> x(ta.begin(), ta.end()), y(tb.begin(), tb.end());
    if (x.empty() && y.empty()) return 1.0;
    std::size_t common = 0;
    for (const auto& w : x) common += y.count(w);
    return static_cast<double>(common) / static_cast<double>(x.size() + y.size() - common);
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        dot += a[i] * b[i];
    }
    for (double x : a) na += x * x;
    for (double x : b) nb += x * x;
    if (na == 0 || nb == 0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

TfidfModel::TfidfModel(const std::vector<std::string>& corpus) {
    std::vector<std::size_t> df;
    for (const auto& doc : corpus) {
        const auto tokens = tokenize(doc);
        for (const auto& t : std::set<std::string>(tokens.begin(), tokens.end())) {
            auto [it, added] = vocab_.emplace(t, vocab_.size());
            if (added) df.push_back(0);
            ++df[it->second];
        }
    }
    const double n = static_cast<double>(corpus.size());
    idf_.resize(df.size());
    for (std::size_t i = 0; i < df.size(); ++i) {
        idf_[i] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[i]))) + 1.0;
    }
}

std::vector<double> TfidfModel::vectorize(std::string_view text) const {
    std::vector<double> v(idf_.size(), 0.0);
    for (const auto& t : tokenize(text)) {
        if (auto it = vocab_.find(t); it != vocab_.end()) v[it->second] += 1.0;
    }
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= idf_[i];
    return v;
}

double TfidfModel::similarity(std::string_view a, std::string_view b) const {
    if (tokenize(a) == tokenize(b)) return 1.0;
    return clamp01(cosine(vectorize(a), vectorize(b)));
}

double similarity(std::string_view a, std::string_view b, Metric metric, EmbeddingProvider* provider) {
    switch (metric) {
    case Metric::edit: return edit_similarity(a, b);
    case Metric::jaccard: return jaccard_similarity(a, b);
    case Metric::tfidf: return TfidfModel({std::string(a), std::string(b)}).similarity(a, b);
    case Metric::embed: {
        if (!provider) {
            throw Error(ErrorKind::invalid_spec, "embedding similarity needs an embedding provider");
        }
        if (a == b) return 1.0;
        const auto v = provider->embed({std::string(a), std::string(b)});
        return clamp01((1.0 + cosine(v.at(0), v.at(1))) / 2.0);
    }
    }
    return 0.0;
}

SimilarityTable::SimilarityTable(const std::vector<std::string>& texts, EmbeddingProvider* provider)
    : n_(texts.size()) {
    const TfidfModel tfidf(texts);
    if (provider) embeddings_ = provider->embed(texts);
    for (Metric m : kMetrics) {
        if (m == Metric::embed && !provider) continue;
        std::vector<double> v(n_ * n_, 1.0);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = i + 1; j < n_; ++j) {
                double s = 1.0;
                if (texts[i] != texts[j]) {
                    switch (m) {
                    case Metric::edit: s = edit_similarity(texts[i], texts[j]); break;
                    case Metric::jaccard: s = jaccard_similarity(texts[i], texts[j]); break;
                    case Metric::tfidf: s = tfidf.similarity(texts[i], texts[j]); break;
                    case Metric::embed: s = clamp01((1.0 + cosine(embeddings_[i], embeddings_[j])) / 2.0); break;
                    }
                }
                v[i * n_ + j] = v[j * n_ + i] = s;
            }
        }
        values_[m] = std::move(v);
    }
}

bool SimilarityTable::has(Metric metric) const { return values_.count(metric) != 0; }

double SimilarityTable::at(Metric metric, std::size_t i, std::size_t j) const {
    auto it = values_.find(metric);
    if (it == values_.end()) {
        throw Error(ErrorKind::invalid_spec, "similarity table has no '" + std::string(metric_name(metric)) + "' values");
    }
    return it->second.at(i * n_ + j);
}

KMeansResult kmeans(const std::vector<std::vector<double>>& points, std::size_t k, std::uint64_t seed,
                    std::size_t max_iterations) {
    KMeansResult r;
    const std::size_t n = points.size();
    k = std::min(k, n);
    if (k == 0) return r;
    Rng rng(seed);

    std::vector<std::size_t> centers{static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1))};
    std::vector<double> d2(n);
    while (centers.size() < k) {
        double total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::numeric_limits<double>::infinity();
            for (auto c : centers) d2[i] = std::min(d2[i], squared_distance(points[i], points[c]));
            total += d2[i];
        }
        std::size_t pick = 0;
        if (total <= 0) {
            pick = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
        } else {
            double target = rng.unit() * total;
            for (pick = 0; pick + 1 < n; ++pick) {
                if (d2[pick] > 0 && target < d2[pick]) break;
                target -= d2[pick];
            }
        }
        centers.push_back(pick);
    }
    for (auto c : centers) r.centroids.push_back(points[c]);

    r.labels.assign(n, 0);
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
        bool changed = iter == 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double d = squared_distance(points[i], r.centroids[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (r.labels[i] != best) changed = true;
            r.labels[i] = best;
        }
        if (!changed) break;
        for (std::size_t c = 0; c < k; ++c) {
            std::vector<double> sum(points[0].size(), 0.0);
            std::size_t count = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (r.labels[i] != c) continue;
                for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += points[i][d];
                ++count;
            }
            if (count == 0) continue;
            for (double& x : sum) x /= static_cast<double>(count);
            r.centroids[c] = std::move(sum);
        }
    }
    return r;
}

std::size_t anchor_index(const std::vector<std::string>& texts) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < texts.size(); ++i) {
        if (texts[i].size() > texts[best].size() || (texts[i].size() == texts[best].size() && texts[i] < texts[best])) {
            best = i;
        }
    }
    return best;
}

DiverseSelection select_diverse(const std::vector<std::string>& correct_paths, std::size_t cap,
                                EmbeddingProvider* provider, std::uint64_t seed) {
    if (cap == 0) {
        throw Error(ErrorKind::invalid_spec, "selection cap must be at least 1");
    }
    DiverseSelection sel;
    if (correct_paths.empty()) return sel;

    // unique texts, remembering their first position in the input
    std::vector<std::string> texts;
    std::vector<std::size_t> origin;
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < correct_paths.size(); ++i) {
        if (seen.emplace(correct_paths[i], texts.size()).second) {
            texts.push_back(correct_paths[i]);
            origin.push_back(i);
        }
    }
    const std::size_t a = anchor_index(texts);
    sel.anchor = origin[a];

    const SimilarityTable table(texts, provider);
    for (Metric m : kMetrics) {
        if (!table.has(m) || texts.size() < 2) continue;
        std::optional<std::size_t> best;
        for (std::size_t j = 0; j < texts.size(); ++j) {
            if (j == a) continue;
            if (!best) {
                best = j;
                continue;
            }
            const double sj = table.at(m, a, j), sb = table.at(m, a, *best);
            if (sj < sb || (sj == sb && texts[j] < texts[*best])) best = j;
        }
        sel.nominations[std::string(metric_name(m))] = {origin[*best]};
    }
    if (provider) {
        const auto& points = table.embeddings();
        const auto km = kmeans(points, std::min<std::size_t>(5, texts.size()), seed);
        std::vector<std::size_t> medoids;
        for (std::size_t c = 0; c < km.centroids.size(); ++c) {
            std::optional<std::size_t> best;
            for (std::size_t i = 0; i < texts.size(); ++i) {
                if (km.labels[i] != c) continue;
                if (!best) {
                    best = i;
                    continue;
                }
                const double di = squared_distance(points[i], km.centroids[c]);
                const double db = squared_distance(points[*best], km.centroids[c]);
                if (di < db || (di == db && texts[i] < texts[*best])) best = i;
            }
            if (best) medoids.push_back(origin[*best]);
        }
        sel.nominations["kmeans"] = medoids;
    }

    sel.chosen.push_back(sel.anchor);
    auto add = [&](std::size_t idx) {
        if (sel.chosen.size() < cap && std::find(sel.chosen.begin(), sel.chosen.end(), idx) == sel.chosen.end()) {
            sel.chosen.push_back(idx);
        }
    };
    for (const char* strategy : {"edit", "jaccard", "tfidf", "embed", "kmeans"}) {
        if (auto it = sel.nominations.find(strategy); it != sel.nominations.end()) {
            for (auto idx : it->second) add(idx);
        }
    }
    return sel;
}

std::optional<DispreferredChoice> select_dispreferred(const std::string& anchor,
                                                      const std::vector<std::string>& incorrect,
                                                      EmbeddingProvider* provider) {
    if (incorrect.empty()) return std::nullopt;
    std::vector<std::string> texts = incorrect;
    texts.push_back(anchor);
    const std::size_t a = texts.size() - 1;
    const SimilarityTable table(texts, provider);

    // longer, then lexicographically smaller, then earlier
    auto preferred = [&](std::size_t i, std::size_t j) {
        if (incorrect[i].size() != incorrect[j].size()) return incorrect[i].size() > incorrect[j].size();
        if (incorrect[i] != incorrect[j]) return incorrect[i] < incorrect[j];
        return i < j;
    };

    DispreferredChoice choice;
    std::vector<std::size_t> count(incorrect.size(), 0);
    for (Metric m : kMetrics) {
        if (!table.has(m)) continue;
        std::size_t best = 0;
        for (std::size_t j = 1; j < incorrect.size(); ++j) {
            const double sj = table.at(m, a, j), sb = table.at(m, a, best);
            if (sj > sb || (sj == sb && preferred(j, best))) best = j;
        }
        choice.votes[std::string(metric_name(m))] = best;
        ++count[best];
    }
    std::size_t winner = 0;
    for (std::size_t j = 1; j < incorrect.size(); ++j) {
        if (count[j] > count[winner] || (count[j] == count[winner] && preferred(j, winner))) winner = j;
    }
    choice.index = winner;
    return choice;
}

double dpo_loss(double beta, double logp_policy_w, double logp_policy_l, double logp_ref_w, double logp_ref_l) {
    if (!(beta > 0.0)) {
        throw Error(ErrorKind::invalid_spec, "beta must be positive");
    }
    const double z = beta * ((logp_policy_w - logp_policy_l) - (logp_ref_w - logp_ref_l));
    // softplus(-z) = -log sigmoid(z)
    return std::max(-z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

DpoGradient dpo_loss_gradient(double beta, double logp_policy_w, double logp_policy_l, double logp_ref_w,
                              double logp_ref_l) {
    if (!(beta > 0.0)) {
        throw Error(ErrorKind::invalid_spec, "beta must be positive");
    }
    const double z = beta * ((logp_policy_w - logp_policy_l) - (logp_ref_w - logp_ref_l));
    const double sig_neg = z >= 0 ? std::exp(-z) / (1.0 + std::exp(-z)) : 1.0 / (1.0 + std::exp(z));
    const double dz = -sig_neg;
    return {dz * beta, -dz * beta, -dz * beta, dz * beta};
}

} // namespace graphreason
