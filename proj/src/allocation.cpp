#include "hcps/allocation.hpp"

#include "hcps/error.hpp"
#include "lexer.hpp"
#include "text_util.hpp"

namespace hcps {

namespace {

void require_positive(const Rational& w, const std::string& what) {
  if (w <= 0) throw Error(Errc::invalid_weights, what + " must be positive, got " + to_decimal_string(w));
}

template <class WeightOf>
Rational level(const std::vector<TaskSpec>& tasks, WeightOf weight_of) {
  if (tasks.empty()) throw Error(Errc::empty_task_list, "no tasks");
  Rational human{0}, total{0};
  for (const auto& t : tasks) {
    const Rational w = weight_of(t);
    require_positive(w, "weight of task " + t.id);
    total += w;
    if (t.assignee == Assignee::human) human += w;
  }
  return round_half_up(Rational(1) - human / total, 4);
}

}  // namespace

const char* to_string(TaskCategory c) {
  switch (c) {
    case TaskCategory::skill_based: return "skill_based";
    case TaskCategory::rule_based: return "rule_based";
    case TaskCategory::knowledge_based: return "knowledge_based";
    case TaskCategory::expertise_based: return "expertise_based";
  }
  return "skill_based";
}

const char* to_string(Assignee a) { return a == Assignee::human ? "human" : "machine"; }

std::optional<TaskCategory> parse_category(std::string_view text) {
  for (auto c : {TaskCategory::skill_based, TaskCategory::rule_based, TaskCategory::knowledge_based,
                 TaskCategory::expertise_based})
    if (text == to_string(c)) return c;
  return std::nullopt;
}

const char* to_string(Recommendation r) {
  switch (r) {
    case Recommendation::machine: return "machine";
    case Recommendation::human: return "human";
    case Recommendation::machine_assists_human: return "machine-assists-human";
    case Recommendation::human_leads: return "human-leads";
  }
  return "human";
}

void CategoryWeights::validate() const {
  require_positive(skill, "skill weight");
  if (!(skill <= rule && rule <= knowledge && knowledge <= expertise))
    throw Error(Errc::invalid_weights, "category weights must be ordered skill <= rule <= knowledge <= expertise");
}

const Rational& CategoryWeights::of(TaskCategory c) const {
  switch (c) {
    case TaskCategory::skill_based: return skill;
    case TaskCategory::rule_based: return rule;
    case TaskCategory::knowledge_based: return knowledge;
    case TaskCategory::expertise_based: return expertise;
  }
  return skill;
}

Rational loa(const std::vector<TaskSpec>& tasks) {
  return level(tasks, [](const TaskSpec& t) { return t.weight; });
}

Rational loa_weighted(const std::vector<TaskSpec>& tasks, const CategoryWeights& cw) {
  if (tasks.empty()) throw Error(Errc::empty_task_list, "no tasks");
  cw.validate();
  return level(tasks, [&](const TaskSpec& t) { return cw.of(t.category); });
}

Recommendation recommend_allocation(TaskCategory category, const AllocationFlags& flags) {
  switch (category) {
    case TaskCategory::skill_based:
      return flags.reliable_feedback.value_or(true) ? Recommendation::machine : Recommendation::human;
    case TaskCategory::rule_based:
      return flags.mature_rules.value_or(true) ? Recommendation::machine : Recommendation::human;
    case TaskCategory::knowledge_based: return Recommendation::machine_assists_human;
    case TaskCategory::expertise_based: return Recommendation::human_leads;
  }
  return Recommendation::human;
}

std::vector<TaskSpec> parse_tasks(std::string_view text) {
  std::vector<TaskSpec> out;
  for (const auto& line : detail::tokenize(text)) {
    detail::LineCursor cur(line);
    cur.keyword("TASK");
    TaskSpec t;
    t.id = cur.next("task id").text;
    const auto& cat = cur.next("category");
    const auto c = parse_category(cat.text);
    if (!c) throw SyntaxError(line.number, cat.column, "skill_based, rule_based, knowledge_based or expertise_based");
    t.category = *c;
    cur.keyword("WEIGHT");
    const std::size_t wcol = cur.peek() ? cur.peek()->column : 0;
    t.weight = cur.decimal("weight");
    if (t.weight <= 0) throw SyntaxError(line.number, wcol, "positive weight");
    cur.keyword("ASSIGNEE");
    const auto& a = cur.next("human or machine");
    if (a.text != "human" && a.text != "machine") throw SyntaxError(line.number, a.column, "human or machine");
    t.assignee = a.text == "human" ? Assignee::human : Assignee::machine;
    cur.finish();
    out.push_back(std::move(t));
  }
  return out;
}

std::string format_tasks(const std::vector<TaskSpec>& tasks) {
  std::string out;
  for (const auto& t : tasks)
    out += "TASK " + t.id + " " + to_string(t.category) + " WEIGHT " + to_decimal_string(t.weight) + " ASSIGNEE " +
           to_string(t.assignee) + "\n";
  return out;
}

CategoryWeights parse_category_weights(std::string_view text) {
  std::vector<Rational> parts;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    const auto piece = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    parts.push_back(parse_decimal(piece));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (parts.size() != 4) throw Error(Errc::invalid_weights, "expected four comma-separated category weights");
  CategoryWeights cw{parts[0], parts[1], parts[2], parts[3]};
  cw.validate();
  return cw;
}

}  // namespace hcps
