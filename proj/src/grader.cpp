#include "graphreason/grader.hpp"

#include "graphreason/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <regex>

namespace graphreason {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::optional<std::int64_t> to_int(std::string_view digits) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
    return v;
}

/// Integers inside the first [...] group; removes the group from `s`.
std::optional<std::vector<NodeId>> take_bracket_list(std::string& s) {
    const auto open = s.find('[');
    if (open == std::string::npos) return std::nullopt;
    const auto close = s.find(']', open);
    if (close == std::string::npos) return std::nullopt;
    std::vector<NodeId> nodes;
    std::string_view inner(s.data() + open + 1, close - open - 1);
    std::size_t i = 0;
    while (i < inner.size()) {
        if (std::isdigit(static_cast<unsigned char>(inner[i]))) {
            std::size_t j = i;
            while (j < inner.size() && std::isdigit(static_cast<unsigned char>(inner[j]))) ++j;
            auto v = to_int(inner.substr(i, j - i));
            if (!v || *v > 1'000'000) return std::nullopt;
            nodes.push_back(static_cast<NodeId>(*v));
            i = j;
        } else if (inner[i] == ',' || inner[i] == ' ' || inner[i] == '-' || inner[i] == '>') {
            ++i;
        } else {
            return std::nullopt;
        }
    }
    s.erase(open, close - open + 1);
    return nodes;
}

std::optional<std::int64_t> first_integer(std::string_view s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (std::isdigit(static_cast<unsigned char>(s[i])) && (i == 0 || !word_char(s[i - 1]))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            const bool negative = i > 0 && s[i - 1] == '-';
            // "7.0" is 7, "7.5" is not an integer answer
            if (j + 1 < s.size() && s[j] == '.' && std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
                std::size_t k = j + 1;
                while (k < s.size() && s[k] == '0') ++k;
                if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) return std::nullopt;
            }
            if (auto v = to_int(s.substr(i, j - i))) return negative ? -*v : *v;
        }
    }
    return std::nullopt;
}

std::string_view skip_noise(std::string_view s) {
    while (!s.empty() && !std::isalnum(static_cast<unsigned char>(s.front())) && s.front() != '[') s.remove_prefix(1);
    return s;
}

bool starts_word(std::string_view s, std::string_view w) {
    return s.substr(0, w.size()) == w && (s.size() == w.size() || !word_char(s[w.size()]));
}

std::optional<Answer> parse_segment(std::string_view raw, Task task) {
    std::string seg = lower(raw);
    const std::string_view head = skip_noise(seg);
    const bool says_none = starts_word(head, "none") || head.starts_with("no path") ||
                           head.starts_with("no such") || head.starts_with("no triangle") ||
                           head.starts_with("there is no");

    if (is_binary(task)) {
        std::optional<bool> label;
        if (starts_word(head, "yes")) label = true;
        else if (starts_word(head, "no")) label = false;
        else if (starts_word(head, "true")) label = true;
        else if (starts_word(head, "false")) label = false;
        if (!label) return std::nullopt;
        Answer a = Answer::boolean(*label);
        if (auto seq = take_bracket_list(seg)) a.sequence = std::move(*seq);
        return a;
    }
    if (task == Task::topology) {
        if (says_none) return Answer::none();
        if (auto seq = take_bracket_list(seg)) return Answer::nodes(std::move(*seq));
        // bare comma or space separated list up to the first sentence end
        std::vector<NodeId> nodes;
        std::size_t i = 0;
        const std::string_view s = head;
        while (i < s.size()) {
            const char c = s[i];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t j = i;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
                auto v = to_int(s.substr(i, j - i));
                if (!v || *v > 1'000'000) return std::nullopt;
                nodes.push_back(static_cast<NodeId>(*v));
                i = j;
            } else if (c == ',' || c == ' ' || c == '-' || c == '>') {
                ++i;
            } else {
                break;
            }
        }
        if (nodes.empty()) return std::nullopt;
        return Answer::nodes(std::move(nodes));
    }
    if (says_none) return Answer::none();
    auto seq = take_bracket_list(seg);
    auto value = first_integer(seg);
    if (!value) return std::nullopt;
    Answer a = Answer::numeric(*value);
    if (seq) a.sequence = std::move(*seq);
    return a;
}

std::size_t rfind_ci(std::string_view text, std::string_view needle) {
    const std::string low = lower(text);
    return low.rfind(needle);
}

bool adjacent_any(const Graph& g, NodeId a, NodeId b) { return g.has_edge(a, b) || g.has_edge(b, a); }

bool in_range(const Graph& g, NodeId x) { return x >= 0 && x < g.num_nodes(); }

bool distinct(std::vector<NodeId> nodes) {
    std::sort(nodes.begin(), nodes.end());
    return std::adjacent_find(nodes.begin(), nodes.end()) == nodes.end();
}

} // namespace

std::optional<Answer> extract_answer(std::string_view text, Task task) {
    if (auto pos = text.rfind("###"); pos != std::string_view::npos) {
        return parse_segment(text.substr(pos + 3), task);
    }
    constexpr std::string_view phrase = "the answer is";
    if (auto pos = rfind_ci(text, phrase); pos != std::string::npos) {
        return parse_segment(text.substr(pos + phrase.size()), task);
    }
    return std::nullopt;
}

std::string_view violation_kind_name(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::node_out_of_range: return "node-out-of-range";
    case ViolationKind::missing_edge: return "missing-edge";
    case ViolationKind::weight_mismatch: return "weight-mismatch";
    }
    return "";
}

ViolationKind parse_violation_kind(std::string_view name) {
    for (auto k : {ViolationKind::node_out_of_range, ViolationKind::missing_edge, ViolationKind::weight_mismatch}) {
        if (violation_kind_name(k) == name) return k;
    }
    throw Error(ErrorKind::invalid_input, "unknown violation kind '" + std::string(name) + "'");
}

std::vector<StepViolation> audit_steps(const Graph& g, std::string_view reasoning) {
    static const std::regex connected_re(R"(node\s+(\d+)\s+is\s+connected\s+(?:to|with)\s+(?:node|ndoe)\s+(\d+))",
                                         std::regex::icase | std::regex::optimize);
    static const std::regex tuple_re(R"(\((\d+)\s*(,|->)\s*(\d+)(?:\s*,\s*(\d+))?\))", std::regex::optimize);
    static const std::regex chain_re(R"(\[(\d+(?:\s*->\s*\d+)+)\])", std::regex::optimize);
    static const std::regex number_re(R"(\d+)", std::regex::optimize);

    std::vector<StepViolation> out;
    auto node_ok = [&](std::size_t sentence, long long x) {
        if (x < 0 || x >= g.num_nodes()) {
            out.push_back({sentence, ViolationKind::node_out_of_range,
                           "node " + std::to_string(x) + " is not in 0.." + std::to_string(g.num_nodes() - 1)});
            return false;
        }
        return true;
    };
    auto claim = [&](std::size_t sentence, long long a, long long b, bool arrow, std::optional<long long> w) {
        const bool ok_a = node_ok(sentence, a);
        const bool ok_b = node_ok(sentence, b);
        if (!ok_a || !ok_b) return;
        const auto u = static_cast<NodeId>(a), v = static_cast<NodeId>(b);
        const std::string shown = "(" + std::to_string(a) + (arrow ? "->" : ",") + std::to_string(b) + ")";
        const bool present = (arrow && g.directed()) ? g.has_edge(u, v) : adjacent_any(g, u, v);
        if (!present) {
            out.push_back({sentence, ViolationKind::missing_edge, "edge " + shown + " is not in the graph"});
            return;
        }
        if (w) {
            auto actual = (arrow && g.directed()) ? g.edge_weight(u, v)
                                                  : (g.has_edge(u, v) ? g.edge_weight(u, v) : g.edge_weight(v, u));
            if (!actual || *actual != *w) {
                out.push_back({sentence, ViolationKind::weight_mismatch,
                               "edge " + shown + " has weight " + (actual ? std::to_string(*actual) : "none") +
                                   ", not " + std::to_string(*w)});
            }
        }
    };

    std::size_t sentence = 0;
    std::size_t start = 0;
    auto scan = [&](std::string_view s) {
        const std::string text(s);
        for (std::sregex_iterator it(text.begin(), text.end(), connected_re), end; it != end; ++it) {
            claim(sentence, std::stoll((*it)[1]), std::stoll((*it)[2]), false, std::nullopt);
        }
        for (std::sregex_iterator it(text.begin(), text.end(), tuple_re), end; it != end; ++it) {
            std::optional<long long> w;
            if ((*it)[4].matched) w = std::stoll((*it)[4]);
            claim(sentence, std::stoll((*it)[1]), std::stoll((*it)[3]), (*it)[2] == "->", w);
        }
        for (std::sregex_iterator it(text.begin(), text.end(), chain_re), end; it != end; ++it) {
            const std::string body = (*it)[1];
            std::vector<long long> nodes;
            for (std::sregex_iterator n(body.begin(), body.end(), number_re), ne; n != ne; ++n) {
                nodes.push_back(std::stoll(n->str()));
            }
            for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
                claim(sentence, nodes[i], nodes[i + 1], true, std::nullopt);
            }
        }
    };
    for (std::size_t i = 0; i <= reasoning.size(); ++i) {
        const bool at_end = i == reasoning.size();
        bool boundary = at_end || reasoning[i] == '\n';
        if (!boundary && (reasoning[i] == '.' || reasoning[i] == '?' || reasoning[i] == '!')) {
            boundary = i + 1 == reasoning.size() || std::isspace(static_cast<unsigned char>(reasoning[i + 1]));
        }
        if (!boundary) continue;
        const auto piece = reasoning.substr(start, i - start);
        if (piece.find_first_not_of(" \t\r\n") != std::string_view::npos) {
            scan(piece);
            ++sentence;
        }
        start = i + 1;
    }
    return out;
}

bool is_simple_path(const Graph& g, const std::vector<NodeId>& path) {
    if (path.empty() || !distinct(path)) return false;
    for (NodeId x : path) {
        if (!in_range(g, x)) return false;
    }
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (!g.has_edge(path[i], path[i + 1])) return false;
    }
    return true;
}

bool is_hamilton_path(const Graph& g, const std::vector<NodeId>& path) {
    return static_cast<int>(path.size()) == g.num_nodes() && (path.empty() || is_simple_path(g, path));
}

bool is_topological_order(const Graph& g, const std::vector<NodeId>& order) {
    if (static_cast<int>(order.size()) != g.num_nodes()) return false;
    std::vector<int> position(g.num_nodes(), -1);
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (!in_range(g, order[i]) || position[order[i]] >= 0) return false;
        position[order[i]] = static_cast<int>(i);
    }
    return std::all_of(g.edges().begin(), g.edges().end(),
                       [&](const Edge& e) { return position[e.u] < position[e.v]; });
}

std::optional<std::int64_t> path_weight(const Graph& g, const std::vector<NodeId>& path) {
    std::int64_t total = 0;
    for (NodeId x : path) {
        if (!in_range(g, x)) return std::nullopt;
    }
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        auto w = g.edge_weight(path[i], path[i + 1]);
        if (!w) return std::nullopt;
        total += *w;
    }
    return total;
}

bool witness_valid(Task task, const Graph& g, const Query& q, const Answer& a) {
    const auto& w = a.witness.nodes;
    switch (a.witness.kind) {
    case WitnessKind::none: return true;
    case WitnessKind::cycle: {
        if (w.size() < 4 || w.front() != w.back()) return false;
        const std::vector<NodeId> inner(w.begin(), w.end() - 1);
        if (!distinct(inner)) return false;
        for (std::size_t i = 0; i + 1 < w.size(); ++i) {
            if (!in_range(g, w[i]) || !adjacent_any(g, w[i], w[i + 1])) return false;
        }
        return true;
    }
    case WitnessKind::path:
        if (task == Task::hamilton) return is_hamilton_path(g, w);
        if (!is_simple_path(g, w)) return false;
        if (q.u && w.front() != *q.u) return false;
        if (q.v && w.back() != *q.v) return false;
        if (task == Task::shortest) return path_weight(g, w) == a.number;
        return true;
    case WitnessKind::partition:
        if (static_cast<int>(w.size()) != g.num_nodes()) return false;
        return std::all_of(g.edges().begin(), g.edges().end(), [&](const Edge& e) { return w[e.u] != w[e.v]; });
    case WitnessKind::odd_cycle:
        if (w.size() < 3 || w.size() % 2 == 0 || !distinct(w)) return false;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (!in_range(g, w[i]) || !adjacent_any(g, w[i], w[(i + 1) % w.size()])) return false;
        }
        return true;
    case WitnessKind::triangle: {
        if (w.size() != 3 || !distinct(w) || !g.node_weights()) return false;
        for (NodeId x : w) {
            if (!in_range(g, x)) return false;
        }
        if (!adjacent_any(g, w[0], w[1]) || !adjacent_any(g, w[0], w[2]) || !adjacent_any(g, w[1], w[2])) return false;
        const auto& l = *g.node_weights();
        return l[w[0]] + l[w[1]] + l[w[2]] == a.number;
    }
    case WitnessKind::order: return is_topological_order(g, w);
    case WitnessKind::mapping: {
        if (!q.pattern || static_cast<int>(w.size()) != q.pattern->num_nodes() || !distinct(w)) return false;
        for (NodeId x : w) {
            if (!in_range(g, x)) return false;
        }
        return std::all_of(q.pattern->edges().begin(), q.pattern->edges().end(),
                           [&](const Edge& e) { return g.has_edge(w[e.u], w[e.v]); });
    }
    }
    return false;
}

bool grade_answer(const Problem& p, const Answer& x, const GradeOptions& options) {
    const Answer& truth = p.answer;
    switch (truth.kind) {
    case AnswerKind::yes_no:
        if (x.kind != AnswerKind::yes_no || x.yes != truth.yes) return false;
        if (options.validate_witness && p.task == Task::hamilton && x.yes && !x.sequence.empty()) {
            return is_hamilton_path(p.graph, x.sequence);
        }
        return true;
    case AnswerKind::numeric:
        if (x.kind != AnswerKind::numeric || x.number != truth.number) return false;
        if (options.validate_witness && p.task == Task::shortest && !x.sequence.empty()) {
            const auto& s = x.sequence;
            return is_simple_path(p.graph, s) && s.front() == p.query.u && s.back() == p.query.v &&
                   path_weight(p.graph, s) == truth.number;
        }
        return true;
    case AnswerKind::node_sequence:
        return x.kind == AnswerKind::node_sequence && is_topological_order(p.graph, x.sequence);
    case AnswerKind::none_exists: return x.kind == AnswerKind::none_exists;
    case AnswerKind::unknown: return false;
    }
    return false;
}

Verdict grade(const Problem& p, std::string_view text, const GradeOptions& options) {
    Verdict v;
    v.extracted = extract_answer(text, p.task);
    v.extraction_failed = !v.extracted;
    v.correct = v.extracted && grade_answer(p, *v.extracted, options);
    v.step_violations = audit_steps(p.graph, text);
    return v;
}

} // namespace graphreason
