#include "graphreason/eval.hpp"

#include "graphreason/error.hpp"
#include "graphreason/parallel.hpp"
#include "graphreason/textgen.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

namespace graphreason {

namespace {

std::string column_title(Task t) {
    std::string s(task_name(t));
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

std::string pct(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", 100.0 * x);
    return buf;
}

void finish(EvalReport& r) {
    std::array<std::vector<double>, 3> groups;
    std::vector<double> all;
    for (Task t : kAllTasks) {
        const std::size_t i = task_index(t);
        if (!r.present[i]) continue;
        groups[static_cast<std::size_t>(task_difficulty(t))].push_back(r.per_task[i].accuracy);
        all.push_back(r.per_task[i].accuracy);
    }
    auto mean = [](const std::vector<double>& v) {
        return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    r.easy = mean(groups[0]);
    r.medium = mean(groups[1]);
    r.hard = mean(groups[2]);
    r.average = mean(all);
}

} // namespace

EvalReport evaluate(const std::vector<Problem>& problems, const std::vector<Prediction>& predictions,
                    const GradeOptions& options, int jobs) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < problems.size(); ++i) {
        if (!index.emplace(problems[i].id, i).second) {
            throw Error(ErrorKind::evaluation, "duplicate problem id '" + problems[i].id + "'");
        }
    }
    std::vector<const std::string*> output(problems.size(), nullptr);
    std::vector<std::string> orphans;
    for (const auto& pr : predictions) {
        auto it = index.find(pr.id);
        if (it == index.end()) {
            orphans.push_back(pr.id);
            continue;
        }
        if (output[it->second]) {
            throw Error(ErrorKind::evaluation, "more than one prediction for '" + pr.id + "'");
        }
        output[it->second] = &pr.output;
    }
    if (!orphans.empty()) {
        std::sort(orphans.begin(), orphans.end());
        std::string msg = std::to_string(orphans.size()) + " prediction(s) match no problem:";
        for (std::size_t i = 0; i < orphans.size() && i < 20; ++i) msg += " " + orphans[i];
        if (orphans.size() > 20) msg += " ...";
        throw Error(ErrorKind::evaluation, msg);
    }

    std::vector<Verdict> verdicts(problems.size());
    parallel_for(problems.size(), jobs, [&](std::size_t i) {
        if (output[i]) verdicts[i] = grade(problems[i], *output[i], options);
    });

    EvalReport r;
    for (std::size_t i = 0; i < problems.size(); ++i) {
        const std::size_t t = task_index(problems[i].task);
        auto& s = r.per_task[t];
        r.present[t] = true;
        const std::size_t band = static_cast<std::size_t>(std::clamp(problems[i].tier.band, 0, 4));
        ++s.total;
        ++s.band_total[band];
        if (!output[i]) {
            ++s.missing;
            continue;
        }
        const auto& v = verdicts[i];
        if (v.correct) {
            ++s.correct;
            ++s.band_correct[band];
        }
        if (v.extraction_failed) ++s.extraction_failures;
        s.step_violations += v.step_violations.size();
    }
    for (auto& s : r.per_task) {
        s.accuracy = s.total ? static_cast<double>(s.correct) / static_cast<double>(s.total) : 0.0;
    }
    finish(r);
    return r;
}

std::string report_json(const EvalReport& r) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json tasks = nlohmann::ordered_json::object();
    for (Task t : kAllTasks) {
        const auto& s = r.per_task[task_index(t)];
        if (!r.present[task_index(t)]) continue;
        nlohmann::ordered_json bands = nlohmann::ordered_json::array();
        for (std::size_t b = 0; b < 5; ++b) {
            bands.push_back({{"total", s.band_total[b]},
                             {"correct", s.band_correct[b]},
                             {"accuracy", s.band_total[b] ? static_cast<double>(s.band_correct[b]) /
                                                                static_cast<double>(s.band_total[b])
                                                          : 0.0}});
        }
        tasks[std::string(task_name(t))] = {{"difficulty", difficulty_name(task_difficulty(t))},
                                            {"total", s.total},
                                            {"correct", s.correct},
                                            {"accuracy", s.accuracy},
                                            {"missing", s.missing},
                                            {"extraction_failures", s.extraction_failures},
                                            {"step_violations", s.step_violations},
                                            {"bands", std::move(bands)}};
    }
    j["tasks"] = std::move(tasks);
    j["easy"] = r.easy;
    j["medium"] = r.medium;
    j["hard"] = r.hard;
    j["average"] = r.average;
    j["backend_errors"] = r.backend_errors;
    j["runs"] = r.runs;
    return j.dump(2) + "\n";
}

std::string report_text(const EvalReport& r) {
    std::vector<std::string> head{"", "Easy", "", "", "", "Medium", "", "", "Hard", "", ""};
    std::vector<std::string> names{""};
    std::vector<std::string> acc{"Accuracy (%)"};
    std::vector<std::string> count{"Correct/Total"};
    std::vector<std::string> fails{"Extraction failures"};
    std::vector<std::string> viol{"Step violations"};
    for (Task t : kAllTasks) {
        const std::size_t i = task_index(t);
        const auto& s = r.per_task[i];
        names.push_back(column_title(t));
        if (!r.present[i]) {
            for (auto* row : {&acc, &count, &fails, &viol}) row->push_back("-");
            continue;
        }
        acc.push_back(pct(s.accuracy));
        count.push_back(std::to_string(s.correct) + "/" + std::to_string(s.total));
        fails.push_back(std::to_string(s.extraction_failures));
        viol.push_back(std::to_string(s.step_violations));
    }
    names.push_back("Average");
    acc.push_back(pct(r.average));
    for (auto* row : {&count, &fails, &viol}) row->push_back("");

    const std::vector<std::vector<std::string>> rows{head, names, acc, count, fails, viol};
    std::vector<std::size_t> width(names.size(), 0);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    std::ostringstream os;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::string cell = row[i];
            const std::size_t pad = width[i] - cell.size();
            line += i == 0 ? cell + std::string(pad, ' ') : "  " + std::string(pad, ' ') + cell;
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        os << line << '\n';
    }
    os << "\nEasy " << pct(r.easy) << "  Medium " << pct(r.medium) << "  Hard " << pct(r.hard) << "  Average "
       << pct(r.average);
    if (r.runs > 1) os << "  (mean of " << r.runs << " runs)";
    if (r.backend_errors) os << "  backend errors: " << r.backend_errors;
    os << '\n';
    return os.str();
}

EvalRun run_eval(const std::vector<Problem>& problems, Backend& backend, std::size_t repetitions,
                 SampleCache* cache, int jobs, const GradeOptions& options) {
    if (repetitions == 0) {
        throw Error(ErrorKind::invalid_spec, "repetitions must be at least 1");
    }
    Sampler sampler(backend, cache);
    EvalRun run;
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        const std::string profile =
            rep == 0 ? std::string(profile_name(Profile::eval)) : "eval.r" + std::to_string(rep);
        std::vector<Prediction> preds(problems.size());
        std::vector<char> failed(problems.size(), 0);
        parallel_for(problems.size(), jobs, [&](std::size_t i) {
            preds[i].id = problems[i].id;
            try {
                auto out = sampler.sample(make_request(Profile::eval, wrap_instruction(render_problem(problems[i]))),
                                          profile);
                preds[i].output = out.empty() ? std::string() : out.front();
            } catch (const BackendError&) {
                failed[i] = 1;
            }
        });
        EvalReport rep_report = evaluate(problems, preds, options, jobs);
        rep_report.backend_errors = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
        if (rep == 0) run.predictions = std::move(preds);
        run.runs.push_back(rep_report);
    }

    EvalReport& avg = run.report;
    avg = run.runs.front();
    avg.runs = repetitions;
    if (repetitions > 1) {
        for (std::size_t t = 0; t < 9; ++t) {
            double sum = 0.0, sq = 0.0;
            for (const auto& r : run.runs) {
                sum += r.per_task[t].accuracy;
                sq += r.per_task[t].accuracy * r.per_task[t].accuracy;
            }
            const double n = static_cast<double>(repetitions);
            avg.per_task[t].accuracy = sum / n;
            run.accuracy_stddev[t] = std::sqrt(std::max(0.0, sq / n - (sum / n) * (sum / n)));
        }
        avg.backend_errors = 0;
        for (const auto& r : run.runs) avg.backend_errors += r.backend_errors;
        finish(avg);
    }
    return run;
}

} // namespace graphreason
