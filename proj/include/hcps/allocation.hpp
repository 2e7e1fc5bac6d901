#pragma once
// Task classification (skill/rule/knowledge/expertise based) and level of
// automation over a task list.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hcps/decimal.hpp"

namespace hcps {

enum class TaskCategory { skill_based, rule_based, knowledge_based, expertise_based };
enum class Assignee { machine, human };

const char* to_string(TaskCategory c);
const char* to_string(Assignee a);
std::optional<TaskCategory> parse_category(std::string_view text);

struct TaskSpec {
  std::string id;
  TaskCategory category = TaskCategory::skill_based;
  Rational weight{1};
  Assignee assignee = Assignee::machine;

  bool operator==(const TaskSpec&) const = default;
};

struct CategoryWeights {
  Rational skill{1}, rule{2}, knowledge{3}, expertise{4};

  // Throws InvalidWeights unless 0 < skill <= rule <= knowledge <= expertise.
  void validate() const;
  const Rational& of(TaskCategory c) const;
};

// 1 - sum(t_i w_i) / sum(w_i), t_i = 1 for human tasks; rounded to 4 places.
Rational loa(const std::vector<TaskSpec>& tasks);
// Same, with each task weighted by its category weight instead.
Rational loa_weighted(const std::vector<TaskSpec>& tasks, const CategoryWeights& cw = {});

enum class Recommendation { machine, human, machine_assists_human, human_leads };
const char* to_string(Recommendation r);

struct AllocationFlags {
  std::optional<bool> reliable_feedback;
  std::optional<bool> mature_rules;
};

Recommendation recommend_allocation(TaskCategory category, const AllocationFlags& flags = {});

// `TASK <id> <category> WEIGHT <d> ASSIGNEE human|machine` per line.
std::vector<TaskSpec> parse_tasks(std::string_view text);
std::string format_tasks(const std::vector<TaskSpec>& tasks);
// "a,b,c,d"
CategoryWeights parse_category_weights(std::string_view text);

}  // namespace hcps
