#include "graphreason/textgen.hpp"

#include "graphreason/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

namespace graphreason {

namespace {

constexpr std::string_view kInstructionHead =
    "Below is an instruction that describes a task.\n"
    "Write a response that appropriately completes the request.\n\n"
    "### Instruction:\n";
constexpr std::string_view kInstructionMarker = "### Instruction:";
constexpr std::string_view kResponseTail = "\n\n### Response:";

std::string node_letter(int i) { return std::string(1, static_cast<char>('a' + i)); }

std::string tuple_text(const Edge& e, bool directed, bool spaced, bool letters) {
    auto name = [&](NodeId x) { return letters ? node_letter(x) : std::to_string(x); };
    std::string s = "(" + name(e.u) + (directed ? "->" : (spaced ? ", " : ",")) + name(e.v);
    if (e.weight) {
        s += "," + std::to_string(*e.weight);
    }
    return s + ")";
}

std::string edge_list(const Graph& g, bool spaced, bool letters) {
    std::string s;
    for (const auto& e : g.edges()) {
        if (!s.empty()) s += ' ';
        s += tuple_text(e, g.directed(), spaced, letters);
    }
    return s;
}

std::string edges_clause(const Graph& g, bool spaced, bool letters = false) {
    if (g.edge_count() == 0) {
        return ", and there are no edges.";
    }
    return ", and the edges are: " + edge_list(g, spaced, letters) + ".";
}

std::string last_node_name(int n, bool letters) {
    return letters ? node_letter(std::max(n - 1, 0)) : std::to_string(std::max(n - 1, 0));
}

NodeId need(const std::optional<NodeId>& x, Task task) {
    if (!x) {
        throw Error(ErrorKind::invalid_query, std::string(task_name(task)) + " problem is missing a query node");
    }
    return *x;
}

} // namespace

std::string render_edges(const Graph& g, bool spaced) { return edge_list(g, spaced, false); }

std::string render_question(Task task, const Graph& g, const Query& q) {
    const std::string numbered = "numbered from 0 to " + last_node_name(g.num_nodes(), false);
    switch (task) {
    case Task::cycle:
        return "The nodes are " + numbered + edges_clause(g, false) + " Is there a cycle in this graph?";
    case Task::connect:
        return "The nodes are " + numbered + edges_clause(g, false) + " Is there a path between node " +
               std::to_string(need(q.u, task)) + " and node " + std::to_string(need(q.v, task)) + "?";
    case Task::bipartite:
        return "The nodes are " + numbered + edges_clause(g, false) + " Is this graph bipartite?";
    case Task::topology:
        return "The nodes are " + numbered + edges_clause(g, false) + " Give one topology sorting path of this graph.";
    case Task::shortest:
        return "In an undirected graph, the nodes are " + numbered + edges_clause(g, false) +
               " Give the weight of the shortest path from node " + std::to_string(need(q.u, task)) + " to node " +
               std::to_string(need(q.v, task)) + ".";
    case Task::triangle: {
        std::string s = "The nodes are " + numbered;
        if (const auto& w = g.node_weights()) {
            s += ", weights of nodes are:";
            for (std::size_t i = 0; i < w->size(); ++i) {
                s += " [" + std::to_string(i) + ", " + std::to_string((*w)[i]) + "]";
            }
        }
        return s + edges_clause(g, true) + " What is the maximum sum of the weights of three interconnected nodes?";
    }
    case Task::flow:
        return "The nodes are " + numbered + edges_clause(g, false) + " What is the maximum flow from node " +
               std::to_string(need(q.u, task)) + " to node " + std::to_string(need(q.v, task)) + "?";
    case Task::hamilton:
        return "The nodes are " + numbered + edges_clause(g, false) + " Is there a Hamiltonian path in this graph?";
    case Task::subgraph: {
        if (!q.pattern) {
            throw Error(ErrorKind::invalid_query, "subgraph problem is missing its pattern graph");
        }
        const auto& pat = *q.pattern;
        return "The nodes of graph G are " + numbered + edges_clause(g, false) +
               " The nodes of subgraph G' are numbered from a to " + last_node_name(pat.num_nodes(), true) +
               edges_clause(pat, false, true) + " Is subgraph G' present within graph G as a direct substructure?";
    }
    }
    throw Error(ErrorKind::invalid_spec, "unknown task");
}

std::string render_problem(const Problem& p) { return render_question(p.task, p.graph, p.query); }

std::string wrap_instruction(std::string_view question) {
    if (question.find(kInstructionMarker) != std::string_view::npos) {
        throw Error(ErrorKind::invalid_input, "text is already wrapped in an instruction frame");
    }
    std::string s(kInstructionHead);
    s += question;
    s += kResponseTail;
    return s;
}

std::string PromptTemplate::render(std::string_view question, std::size_t shots) const {
    if (shots > exemplars.size()) {
        throw Error(ErrorKind::invalid_spec, std::to_string(shots) + " shots requested but the " +
                                                 std::string(task_name(task)) + " template has " +
                                                 std::to_string(exemplars.size()) + " exemplars");
    }
    std::string s = header;
    if (shots == 0) {
        s += "\nQ: ";
        s += question;
        s += "\nA: Let's think step by step";
        return s;
    }
    s += "\n" + intro + "\n\n";
    for (std::size_t i = 0; i < shots; ++i) {
        s += "Q: " + exemplars[i].question + "\nA: " + exemplars[i].answer + "\n\n";
    }
    s += "Q: ";
    s += question;
    s += "\nA:";
    return s;
}

std::string build_cot_prompt(const PromptTemplate& tmpl, const Problem& p, std::size_t shots) {
    if (tmpl.task != p.task) {
        throw Error(ErrorKind::invalid_spec, "template is for task '" + std::string(task_name(tmpl.task)) +
                                                 "' but the problem is '" + std::string(task_name(p.task)) + "'");
    }
    if (shots > tmpl.exemplars.size()) {
        return template_with_shots(tmpl, shots).render(render_problem(p), shots);
    }
    return tmpl.render(render_problem(p), shots);
}

std::string build_cot_prompt(Task task, const Problem& p, std::size_t shots) {
    return build_cot_prompt(default_template(task), p, shots);
}

std::string build_cot_prompt(std::string_view task, const Problem& p, std::size_t shots) {
    return build_cot_prompt(parse_task(task), p, shots);
}

std::string_view extract_question(std::string_view prompt) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    if (auto pos = prompt.rfind(kInstructionMarker); pos != std::string_view::npos) {
        auto body = prompt.substr(pos + kInstructionMarker.size());
        if (auto end = body.find("### Response:"); end != std::string_view::npos) {
            body = body.substr(0, end);
        }
        return trim(body);
    }
    if (auto pos = prompt.rfind("Q: "); pos != std::string_view::npos) {
        auto body = prompt.substr(pos + 3);
        if (auto end = body.find("\nA:"); end != std::string_view::npos) {
            body = body.substr(0, end);
        }
        return trim(body);
    }
    return trim(prompt);
}

std::size_t estimate_tokens(std::string_view text) { return (text.size() + 3) / 4; }

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct RawTuple {
    std::size_t offset;
    int u;
    int v;
    bool arrow;
    std::optional<int> weight;
};

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    std::size_t pos() const { return pos_; }
    bool done() const { return pos_ >= text_.size(); }
    std::string_view rest() const { return text_.substr(pos_); }

    void skip_spaces() {
        while (!done() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r')) {
            ++pos_;
        }
    }

    bool accept(std::string_view lit) {
        if (rest().substr(0, lit.size()) == lit) {
            pos_ += lit.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view lit) {
        if (!accept(lit)) {
            throw ParseError(pos_, "expected \"" + std::string(lit) + "\"");
        }
    }

    int integer() {
        int value = 0;
        const char* first = text_.data() + pos_;
        const char* last = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr == first) {
            throw ParseError(pos_, "expected an integer");
        }
        pos_ += static_cast<std::size_t>(ptr - first);
        return value;
    }

    int node(bool letters) {
        if (!letters) {
            return integer();
        }
        if (done() || text_[pos_] < 'a' || text_[pos_] > 'z') {
            throw ParseError(pos_, "expected a node letter");
        }
        return text_[pos_++] - 'a';
    }

    char peek() const { return done() ? '\0' : text_[pos_]; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

RawTuple parse_tuple(Cursor& c, bool letters) {
    RawTuple t{};
    t.offset = c.pos();
    c.expect("(");
    c.skip_spaces();
    t.u = c.node(letters);
    c.skip_spaces();
    if (c.accept("->")) {
        t.arrow = true;
    } else if (c.accept(",")) {
        t.arrow = false;
    } else {
        throw ParseError(c.pos(), "expected ',' or '->' inside an edge tuple");
    }
    c.skip_spaces();
    t.v = c.node(letters);
    c.skip_spaces();
    if (c.accept(",")) {
        c.skip_spaces();
        t.weight = c.integer();
        c.skip_spaces();
    }
    c.expect(")");
    return t;
}

/// Edge clause after the node count: ", and the edges are: (..) (..)." or ", and there are no edges."
std::vector<RawTuple> parse_edge_clause(Cursor& c, bool letters) {
    std::vector<RawTuple> tuples;
    if (c.accept(", and there are no edges.")) {
        return tuples;
    }
    c.expect(", and the edges are:");
    c.skip_spaces();
    while (c.peek() == '(') {
        tuples.push_back(parse_tuple(c, letters));
        c.skip_spaces();
    }
    c.expect(".");
    return tuples;
}

Graph build_graph(int n, bool directed, const std::vector<RawTuple>& tuples, std::size_t count_offset) {
    if (n < 1 || n > kMaxNodes) {
        throw ParseError(count_offset, "node count " + std::to_string(n) + " outside [1, 100]");
    }
    Graph g(n, directed);
    for (const auto& t : tuples) {
        if (t.u < 0 || t.v < 0 || t.u >= n || t.v >= n) {
            throw ParseError(t.offset, "edge endpoint outside 0.." + std::to_string(n - 1));
        }
        if (t.u == t.v) {
            throw ParseError(t.offset, "self-loop");
        }
        if (t.arrow != directed) {
            throw ParseError(t.offset, directed ? "expected a directed edge (i->j)" : "expected an undirected edge (i,j)");
        }
        if (t.weight && *t.weight < 1) {
            throw ParseError(t.offset, "edge weight must be >= 1");
        }
        g.add_edge(t.u, t.v, t.weight);
    }
    return g;
}

struct QuestionForm {
    Task task;
    std::string_view text;  // "{}" marks a node id
};

constexpr std::array<QuestionForm, 9> kQuestions = {{
    {Task::cycle, "Is there a cycle in this graph?"},
    {Task::connect, "Is there a path between node {} and node {}?"},
    {Task::bipartite, "Is this graph bipartite?"},
    {Task::topology, "Give one topology sorting path of this graph."},
    {Task::shortest, "Give the weight of the shortest path from node {} to node {}."},
    {Task::triangle, "What is the maximum sum of the weights of three interconnected nodes?"},
    {Task::flow, "What is the maximum flow from node {} to node {}?"},
    {Task::hamilton, "Is there a Hamiltonian path in this graph?"},
    {Task::subgraph, "Is subgraph G' present within graph G as a direct substructure?"},
}};

struct QuestionMatch {
    Task task;
    std::vector<std::pair<int, std::size_t>> nodes;  // value, offset
};

std::optional<QuestionMatch> match_question(Cursor c) {
    for (const auto& form : kQuestions) {
        Cursor probe = c;
        QuestionMatch m{form.task, {}};
        std::string_view pattern = form.text;
        bool ok = true;
        while (!pattern.empty()) {
            const auto hole = pattern.find("{}");
            const auto lit = pattern.substr(0, hole);
            if (!probe.accept(lit)) {
                ok = false;
                break;
            }
            if (hole == std::string_view::npos) {
                pattern = {};
                break;
            }
            const auto at = probe.pos();
            try {
                m.nodes.emplace_back(probe.integer(), at);
            } catch (const ParseError&) {
                ok = false;
                break;
            }
            pattern.remove_prefix(hole + 2);
        }
        probe.skip_spaces();
        if (ok && probe.done()) {
            return m;
        }
    }
    return std::nullopt;
}

} // namespace

ParsedProblem parse_problem(std::string_view text) {
    Cursor c(text);
    c.skip_spaces();
    bool subgraph_form = false;
    if (c.accept("In an undirected graph, the nodes are numbered from ")) {
    } else if (c.accept("The nodes of graph G are numbered from ")) {
        subgraph_form = true;
    } else {
        c.expect("The nodes are numbered from ");
    }
    c.expect("0 to ");
    const auto count_offset = c.pos();
    const int n = c.integer() + 1;

    std::optional<std::vector<int>> weights;
    if (c.accept(", weights of nodes are:")) {
        weights.emplace(static_cast<std::size_t>(std::max(n, 0)), 0);
        c.skip_spaces();
        while (c.peek() == '[') {
            const auto at = c.pos();
            c.expect("[");
            c.skip_spaces();
            const int node = c.integer();
            c.skip_spaces();
            c.expect(",");
            c.skip_spaces();
            const int w = c.integer();
            c.skip_spaces();
            c.expect("]");
            if (node < 0 || node >= n) {
                throw ParseError(at, "node weight for a node outside 0.." + std::to_string(n - 1));
            }
            if (w < 1) {
                throw ParseError(at, "node weight must be >= 1");
            }
            (*weights)[node] = w;
            c.skip_spaces();
        }
        if (std::find(weights->begin(), weights->end(), 0) != weights->end()) {
            throw ParseError(c.pos(), "node weights do not cover every node");
        }
    }

    const auto tuples = parse_edge_clause(c, false);

    std::optional<std::pair<int, std::vector<RawTuple>>> pattern;
    std::size_t pattern_offset = 0;
    if (subgraph_form) {
        c.skip_spaces();
        c.expect("The nodes of subgraph G' are numbered from a to ");
        pattern_offset = c.pos();
        const int k = c.node(true) + 1;
        auto ptuples = parse_edge_clause(c, true);
        pattern.emplace(k, std::move(ptuples));
    }

    c.skip_spaces();
    const auto question_offset = c.pos();
    const auto q = match_question(c);
    if (!q) {
        throw ParseError(question_offset, "unrecognised question");
    }
    if ((q->task == Task::subgraph) != subgraph_form) {
        throw ParseError(question_offset, "question does not match the graph description");
    }

    ParsedProblem out;
    out.task = q->task;
    out.graph = build_graph(n, task_is_directed(q->task), tuples, count_offset);
    if (weights) {
        out.graph.set_node_weights(std::move(*weights));
    }
    for (const auto& [value, at] : q->nodes) {
        if (value < 0 || value >= n) {
            throw ParseError(at, "query node " + std::to_string(value) + " outside 0.." + std::to_string(n - 1));
        }
    }
    if (q->nodes.size() == 2) {
        out.query.u = q->nodes[0].first;
        out.query.v = q->nodes[1].first;
    }
    if (pattern) {
        out.query.pattern = build_graph(pattern->first, true, pattern->second, pattern_offset);
    }
    return out;
}

} // namespace graphreason
