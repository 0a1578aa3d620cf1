#include "graphreason/corpus.hpp"
#include "graphreason/error.hpp"
#include "graphreason/eval.hpp"
#include "graphreason/generate.hpp"
#include "graphreason/grader.hpp"
#include "graphreason/sampler.hpp"
#include "graphreason/selector.hpp"
#include "graphreason/solvers.hpp"
#include "graphreason/textgen.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
namespace gr = graphreason;

namespace {

std::vector<std::string> generate(const std::string& task, std::size_t count, std::uint64_t seed) {
    const auto result = gr::generate_problems(gr::default_gen_spec(gr::parse_task(task), count, seed));
    std::vector<std::string> out;
    out.reserve(result.problems.size());
    for (const auto& p : result.problems) out.push_back(gr::to_json_line(p));
    return out;
}

py::dict grade(const std::string& problem, const std::string& text, bool validate_witness) {
    const auto p = gr::from_json_line<gr::Problem>(problem);
    gr::GradeOptions options;
    options.validate_witness = validate_witness;
    const auto v = gr::grade(p, text, options);
    py::list violations;
    for (const auto& s : v.step_violations) {
        py::dict d;
        d["sentence"] = s.sentence;
        d["kind"] = std::string(gr::violation_kind_name(s.kind));
        d["detail"] = s.detail;
        violations.append(d);
    }
    py::dict out;
    out["correct"] = v.correct;
    out["extracted"] = v.extracted ? py::object(py::str(gr::describe(*v.extracted))) : py::none();
    out["extraction_failed"] = v.extraction_failed;
    out["violations"] = violations;
    return out;
}

std::optional<std::string> extract(const std::string& text, const std::string& task) {
    auto a = gr::extract_answer(text, gr::parse_task(task));
    if (!a) return std::nullopt;
    return gr::describe(*a);
}

std::string solve_text(const std::string& question) {
    const auto parsed = gr::parse_problem(question);
    return gr::describe(gr::solve(parsed.task, parsed.graph, parsed.query));
}

gr::Metric parse_metric(const std::string& name) {
    for (auto m : {gr::Metric::edit, gr::Metric::jaccard, gr::Metric::tfidf, gr::Metric::embed}) {
        if (gr::metric_name(m) == name) return m;
    }
    throw gr::Error(gr::ErrorKind::invalid_spec, "unknown metric '" + name + "'");
}

double similarity(const std::string& a, const std::string& b, const std::string& metric) {
    gr::HashingEmbedder embedder;
    return gr::similarity(a, b, parse_metric(metric), &embedder);
}

py::dict select_diverse(const std::vector<std::string>& paths, std::size_t cap, std::uint64_t seed, bool embed) {
    gr::HashingEmbedder embedder;
    const auto s = gr::select_diverse(paths, cap, embed ? &embedder : nullptr, seed);
    py::dict out;
    out["chosen"] = s.chosen;
    out["anchor"] = s.anchor;
    out["nominations"] = s.nominations;
    return out;
}

std::vector<std::string> stub_complete(const std::string& prompt, std::size_t n, std::uint64_t seed, double error_rate) {
    gr::StubBackend stub({seed, error_rate, true});
    gr::SampleRequest req;
    req.prompt = prompt;
    req.n = n;
    return gr::sample(stub, req);
}

std::string evaluate(const std::vector<std::string>& problems, const std::map<std::string, std::string>& predictions) {
    std::vector<gr::Problem> ps;
    ps.reserve(problems.size());
    for (const auto& line : problems) ps.push_back(gr::from_json_line<gr::Problem>(line));
    std::vector<gr::Prediction> preds;
    for (const auto& [id, output] : predictions) preds.push_back({id, output});
    return gr::report_json(gr::evaluate(ps, preds));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Graph reasoning problems, grading and selection";

    py::register_exception<gr::Error>(m, "GraphReasonError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const gr::Error& e) {
            const auto type = py::module_::import("graphreason._core").attr("GraphReasonError");
            const std::string message = std::string(gr::error_kind_name(e.kind())) + ": " + e.what();
            PyErr_SetString(type.ptr(), message.c_str());
        }
    });

    m.def("tasks", [] {
        std::vector<std::string> out;
        for (auto t : gr::kAllTasks) out.emplace_back(gr::task_name(t));
        return out;
    });
    m.def("generate", &generate, py::arg("task"), py::arg("count"), py::arg("seed") = 0,
          "Problems as JSON lines.");
    m.def("render", [](const std::string& problem) { return gr::render_problem(gr::from_json_line<gr::Problem>(problem)); },
          py::arg("problem"));
    m.def("instruction", [](const std::string& problem) {
        return gr::wrap_instruction(gr::render_problem(gr::from_json_line<gr::Problem>(problem)));
    }, py::arg("problem"));
    m.def("cot_prompt", [](const std::string& problem, std::size_t shots) {
        const auto p = gr::from_json_line<gr::Problem>(problem);
        return gr::build_cot_prompt(p.task, p, shots);
    }, py::arg("problem"), py::arg("shots") = 2);
    m.def("solve_text", &solve_text, py::arg("question"), "Parse a rendered question and solve it.");
    m.def("grade", &grade, py::arg("problem"), py::arg("text"), py::arg("validate_witness") = true);
    m.def("extract_answer", &extract, py::arg("text"), py::arg("task"));
    m.def("similarity", &similarity, py::arg("a"), py::arg("b"), py::arg("metric"));
    m.def("select_diverse", &select_diverse, py::arg("paths"), py::arg("cap") = 5, py::arg("seed") = 0,
          py::arg("embed") = true);
    m.def("dpo_loss", &gr::dpo_loss, py::arg("beta"), py::arg("policy_chosen"), py::arg("policy_rejected"),
          py::arg("ref_chosen"), py::arg("ref_rejected"));
    m.def("stub_complete", &stub_complete, py::arg("prompt"), py::arg("n") = 1, py::arg("seed") = 0,
          py::arg("error_rate") = 0.0);
    m.def("evaluate", &evaluate, py::arg("problems"), py::arg("predictions"), "Report as a JSON string.");
}
