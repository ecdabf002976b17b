#include "gpptutor/analytics/study.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <sstream>

namespace gpptutor::analytics {

namespace {

constexpr std::array<Phase, 4> kPhases = {Phase::kPretest, Phase::kTraining, Phase::kLevelEnd, Phase::kPosttest};
constexpr double kMsPerHour = 3600.0 * 1000.0;

using Extractor = std::function<std::optional<double>(const StudentSummary&)>;

struct Metric {
  std::string name;
  std::string label;
  Extractor get;
};

std::vector<Metric> Metrics() {
  std::vector<Metric> out;
  for (Phase p : kPhases) {
    const std::string prefix(ToString(p));
    out.push_back({prefix + ".score", prefix + " score", [p](const StudentSummary& s) { return s.phase(p).mean_score; }});
    out.push_back({prefix + ".rule_accuracy", prefix + " rule accuracy",
                   [p](const StudentSummary& s) { return s.phase(p).rule_accuracy; }});
    out.push_back({prefix + ".incorrect_steps", prefix + " incorrect steps", [p](const StudentSummary& s) {
                     return std::optional<double>(s.phase(p).incorrect_steps);
                   }});
    out.push_back({prefix + ".backward_attempts", prefix + " backward attempts", [p](const StudentSummary& s) {
                     return std::optional<double>(s.phase(p).backward_attempts);
                   }});
    out.push_back({prefix + ".hours", prefix + " time (hours)",
                   [p](const StudentSummary& s) { return std::optional<double>(s.phase(p).total_hours); }});
  }
  out.push_back({"nlg", "NLG", [](const StudentSummary& s) { return s.nlg; }});
  return out;
}

GroupStats Stats(const std::vector<double>& values) {
  GroupStats g;
  g.n = values.size();
  if (values.empty()) return g;
  g.mean = Mean(values);
  g.sd = StdDev(values);
  g.median = Median(values);
  return g;
}

Comparison Compare(const Metric& metric, const std::string& group, const std::vector<const StudentSummary*>& students,
                   int m, double alpha) {
  std::vector<double> control;
  std::vector<double> gpp;
  for (const StudentSummary* s : students) {
    const std::optional<double> v = metric.get(*s);
    if (!v) continue;
    if (s->condition == Condition::kControl) control.push_back(*v);
    if (s->condition == Condition::kGpp) gpp.push_back(*v);
  }
  Comparison c{metric.name, group, Stats(control), Stats(gpp), std::nullopt, m, false};
  if (!control.empty() && !gpp.empty()) {
    c.test = MannWhitneyU(control, gpp);
    c.significant = BonferroniSignificant(c.test->p, m, alpha);
  }
  return c;
}

nlohmann::json OptionalJson(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

nlohmann::json ToJson(const GroupStats& g) {
  return {{"n", g.n}, {"mean", g.mean}, {"sd", g.sd}, {"median", g.median}};
}

std::string Fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string Cell(const GroupStats& g, int decimals) {
  if (g.n == 0) return "-";
  return Fixed(g.mean, decimals) + " (" + Fixed(g.sd, decimals) + ")";
}

std::string Pad(const std::string& s, std::size_t width) {
  // Width is counted in bytes; labels are ASCII.
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

const Comparison* FindComparison(const StudyReport& report, const std::string& metric, const std::string& group) {
  for (const auto& c : report.comparisons) {
    if (c.metric == metric && c.group == group) return &c;
  }
  return nullptr;
}

void TableRow(std::ostringstream& out, const StudyReport& report, const std::string& metric, const std::string& label,
              const std::string& group, int decimals) {
  const Comparison* c = FindComparison(report, metric, group);
  if (c == nullptr) return;
  out << Pad(label, 28) << Pad(Cell(c->control, decimals), 20) << Pad(Cell(c->gpp, decimals), 20);
  if (c->test) {
    out << Pad(Fixed(c->test->u, 1), 10) << Fixed(c->test->p, 3) << (c->significant ? " *" : "");
  } else {
    out << Pad("-", 10) << "-";
  }
  out << '\n';
}

void TableHeader(std::ostringstream& out, const std::string& title, const StudyReport& report,
                 const std::string& group, const std::string& n_metric) {
  const Comparison* c = FindComparison(report, n_metric, group);
  const std::size_t nc = c ? c->control.n : 0;
  const std::size_t ng = c ? c->gpp.n : 0;
  out << title << '\n'
      << Pad("Metric", 28) << Pad("Control (n=" + std::to_string(nc) + ")", 20)
      << Pad("GPP (n=" + std::to_string(ng) + ")", 20) << Pad("U", 10) << "p\n";
}

}  // namespace

StudySummary Summarize(const std::string& student, Condition condition, Phase phase,
                       std::span<const AttemptRecord> records, const Baselines& baselines) {
  StudySummary s{student, condition, phase, 0, std::nullopt, std::nullopt, 0, 0, 0.0};
  std::vector<double> scores;
  std::vector<AttemptRecord> in_phase;
  for (const auto& r : records) {
    if (r.phase != phase || !r.complete()) continue;
    ++s.problems;
    in_phase.push_back(r);
    if (auto score = ScoreProblem(r, baselines)) scores.push_back(score->value);
  }
  const CountMetrics m = Count(in_phase);
  if (!scores.empty()) s.mean_score = Mean(scores);
  if (m.attempts > 0) s.rule_accuracy = static_cast<double>(m.correct) / m.attempts;
  s.incorrect_steps = m.incorrect;
  s.backward_attempts = m.backward;
  s.total_hours = static_cast<double>(m.elapsed) / kMsPerHour;
  return s;
}

StudyReport AnalyzeStudy(std::span<const SessionLog> logs, const Baselines& baselines, const StudyOptions& options) {
  StudyReport report;
  for (const auto& log : logs) {
    StudentSummary s;
    s.student = log.student;
    s.condition = log.condition;
    for (Phase p : kPhases) {
      s.phases[static_cast<std::size_t>(p)] = Summarize(log.student, log.condition, p, log.records, baselines);
    }
    const auto& pre = s.phase(Phase::kPretest).mean_score;
    const auto& post = s.phase(Phase::kPosttest).mean_score;
    if (pre && post) s.nlg = Nlg(*pre, *post);
    s.explanations = static_cast<int>(log.explanations.size());
    report.students.push_back(std::move(s));
  }
  std::sort(report.students.begin(), report.students.end(),
            [](const StudentSummary& a, const StudentSummary& b) { return a.student < b.student; });

  std::vector<std::size_t> with_pretest;
  std::vector<double> pretest_scores;
  for (std::size_t i = 0; i < report.students.size(); ++i) {
    const auto& score = report.students[i].phase(Phase::kPretest).mean_score;
    if (score && report.students[i].condition != Condition::kUnassigned) {
      with_pretest.push_back(i);
      pretest_scores.push_back(*score);
    }
  }
  if (pretest_scores.size() >= 2) {
    const auto groups = MedianSplit(pretest_scores);
    for (std::size_t k = 0; k < with_pretest.size(); ++k) report.students[with_pretest[k]].proficiency = groups[k];
  }

  std::vector<const StudentSummary*> all;
  std::vector<const StudentSummary*> high;
  std::vector<const StudentSummary*> low;
  for (const auto& s : report.students) {
    if (s.condition == Condition::kUnassigned) continue;
    all.push_back(&s);
    if (s.proficiency == Proficiency::kHigh) high.push_back(&s);
    if (s.proficiency == Proficiency::kLow) low.push_back(&s);
  }
  for (const auto& metric : Metrics()) {
    report.comparisons.push_back(Compare(metric, "all", all, 1, options.alpha));
    report.comparisons.push_back(Compare(metric, "High", high, 2, options.alpha));
    report.comparisons.push_back(Compare(metric, "Low", low, 2, options.alpha));
  }

  for (Condition c : {Condition::kControl, Condition::kGpp}) {
    for (Phase p : kPhases) {
      PhaseTotals t{c, p, 0, 0.0, 0.0};
      for (const StudentSummary* s : all) {
        if (s->condition != c) continue;
        ++t.students;
        t.pooled_hours += s->phase(p).total_hours;
      }
      if (t.students > 0) t.mean_hours = t.pooled_hours / static_cast<double>(t.students);
      report.totals.push_back(t);
    }
  }

  report.notes.push_back("Group differences are tested with two-sided Mann-Whitney U (normal approximation).");
  report.notes.push_back("Proficiency groups come from a median split on the pretest score; ties at the median are Low.");
  report.notes.push_back("Mixed-effects regression is not computed.");
  return report;
}

nlohmann::json ToJson(const StudyReport& report) {
  nlohmann::json students = nlohmann::json::array();
  for (const auto& s : report.students) {
    nlohmann::json phases = nlohmann::json::object();
    for (Phase p : kPhases) {
      const StudySummary& ps = s.phase(p);
      phases[std::string(ToString(p))] = {{"problems", ps.problems},
                                          {"mean_score", OptionalJson(ps.mean_score)},
                                          {"rule_accuracy", OptionalJson(ps.rule_accuracy)},
                                          {"incorrect_steps", ps.incorrect_steps},
                                          {"backward_attempts", ps.backward_attempts},
                                          {"total_hours", ps.total_hours}};
    }
    nlohmann::json j = {{"student", s.student},
                        {"condition", ToString(s.condition)},
                        {"phases", std::move(phases)},
                        {"nlg", OptionalJson(s.nlg)},
                        {"explanations", s.explanations}};
    j["proficiency"] = s.proficiency ? nlohmann::json(*s.proficiency == Proficiency::kHigh ? "High" : "Low")
                                     : nlohmann::json();
    students.push_back(std::move(j));
  }
  nlohmann::json comparisons = nlohmann::json::array();
  for (const auto& c : report.comparisons) {
    nlohmann::json j = {{"metric", c.metric},
                        {"group", c.group},
                        {"control", ToJson(c.control)},
                        {"gpp", ToJson(c.gpp)},
                        {"m", c.m},
                        {"significant", c.significant}};
    if (c.test) {
      j["test"] = {{"u_control", c.test->u_a}, {"u_gpp", c.test->u_b}, {"u", c.test->u}, {"z", c.test->z},
                   {"p", c.test->p}};
    } else {
      j["test"] = nullptr;
    }
    comparisons.push_back(std::move(j));
  }
  nlohmann::json totals = nlohmann::json::array();
  for (const auto& t : report.totals) {
    totals.push_back({{"condition", ToString(t.condition)},
                      {"phase", ToString(t.phase)},
                      {"students", t.students},
                      {"pooled_hours", t.pooled_hours},
                      {"mean_hours", t.mean_hours}});
  }
  return {{"version", 1},
          {"students", std::move(students)},
          {"comparisons", std::move(comparisons)},
          {"time_totals", std::move(totals)},
          {"notes", report.notes}};
}

std::string FormatTables(const StudyReport& report) {
  std::ostringstream out;
  TableHeader(out, "Scores and learning gain by condition, mean (SD)", report, "all", "nlg");
  TableRow(out, report, "pretest.score", "Pretest score", "all", 1);
  TableRow(out, report, "posttest.score", "Posttest score", "all", 1);
  TableRow(out, report, "nlg", "NLG", "all", 3);
  out << '\n';

  TableHeader(out, "Training and test metrics by condition, mean (SD)", report, "all", "training.hours");
  for (Phase p : {Phase::kTraining, Phase::kLevelEnd, Phase::kPosttest}) {
    const std::string prefix(ToString(p));
    TableRow(out, report, prefix + ".hours", prefix + " time (hours)", "all", 2);
    TableRow(out, report, prefix + ".rule_accuracy", prefix + " rule accuracy", "all", 3);
    TableRow(out, report, prefix + ".incorrect_steps", prefix + " incorrect steps", "all", 1);
    TableRow(out, report, prefix + ".backward_attempts", prefix + " backward attempts", "all", 1);
  }
  out << '\n';

  for (const std::string group : {"High", "Low"}) {
    TableHeader(out, group +
                         " pretest group, mean (SD); * significant after Bonferroni (m = 2)",
                report, group, "nlg");
    TableRow(out, report, "nlg", "NLG", group, 3);
    TableRow(out, report, "posttest.score", "Posttest score", group, 1);
    TableRow(out, report, "training.hours", "training time (hours)", group, 2);
    TableRow(out, report, "training.rule_accuracy", "training rule accuracy", group, 3);
    TableRow(out, report, "posttest.backward_attempts", "posttest backward attempts", group, 1);
    out << '\n';
  }

  out << "Time per phase (hours): condition, phase, pooled sum, per-student mean\n";
  for (const auto& t : report.totals) {
    out << Pad(std::string(ToString(t.condition)), 10) << Pad(std::string(ToString(t.phase)), 12)
        << Pad(Fixed(t.pooled_hours, 3), 12) << Fixed(t.mean_hours, 3) << '\n';
  }
  for (const auto& n : report.notes) out << "Note: " << n << '\n';
  return out.str();
}

std::string ToCsv(const StudyReport& report) {
  std::ostringstream out;
  out << "student,condition,proficiency,phase,problems,mean_score,rule_accuracy,incorrect_steps,backward_attempts,"
         "total_hours,nlg\n";
  auto opt = [](const std::optional<double>& v) { return v ? Fixed(*v, 6) : std::string(); };
  for (const auto& s : report.students) {
    const std::string prof = s.proficiency ? (*s.proficiency == Proficiency::kHigh ? "High" : "Low") : "";
    for (Phase p : kPhases) {
      const StudySummary& ps = s.phase(p);
      out << s.student << ',' << ToString(s.condition) << ',' << prof << ',' << ToString(p) << ',' << ps.problems
          << ',' << opt(ps.mean_score) << ',' << opt(ps.rule_accuracy) << ',' << ps.incorrect_steps << ','
          << ps.backward_attempts << ',' << Fixed(ps.total_hours, 6) << ',' << opt(s.nlg) << '\n';
    }
  }
  return out.str();
}

}  // namespace gpptutor::analytics
