#pragma once
// Description accuracy (exact and semantic), joint nRMSE, and the four-task
// evaluation matrix with self/opposite viewpoint splits.

#include <string>
#include <vector>

#include "pgae/model.hpp"

namespace pgae {

// Exact sequence match (including the <eos> position), as a percentage.
double describe_accuracy(const std::vector<TokenSeq>& pred, const std::vector<TokenSeq>& truth);

// Secondary rate mapping synonyms to meaning classes before comparing.
double semantic_accuracy(const Vocab& vocab, const Grammar& g, const std::vector<TokenSeq>& pred,
                         const std::vector<TokenSeq>& truth);

// 100 * sqrt(elementwise MSE) / range over one trajectory pair.
double nrmse(const std::vector<Vec>& pred, const std::vector<Vec>& truth, double range);

struct TaskMetrics {
    double acc_exact = 0.0;
    double acc_semantic = 0.0;
    double nrmse = 0.0;
    int n = 0;
};

struct EvalReport {
    TaskMetrics describe_self, describe_opposite;
    TaskMetrics repeat_language, execute;
    TaskMetrics repeat_action_self, repeat_action_opposite;
    double joint_range = 0.0;  // observed over the evaluated set's trajectories
    int n_samples = 0;
};

EvalReport eval_all_tasks(const PgaeModel& model, const Vocab& vocab,
                          const std::vector<const Sample*>& samples, int threads = 0);

// Human-readable table with the published reference numbers alongside.
std::string eval_report_table(const EvalReport& r);
// Deterministic JSON rendering (stable key order and float formatting).
std::string eval_report_json(const EvalReport& r);

}  // namespace pgae
