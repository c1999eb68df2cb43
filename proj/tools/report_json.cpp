#include "report_json.hpp"

#include <string>

namespace embedlab::cli {

namespace {

Json index_or_null(int i) { return i >= 0 ? Json(i) : Json(nullptr); }

Json failed_json(const std::vector<FailedCondition>& fs) {
  Json out = Json::array();
  for (const auto& f : fs) {
    out.push_back({{"name", f.name}, {"detail", f.detail}, {"row", index_or_null(f.row)}, {"col", index_or_null(f.col)}});
  }
  return out;
}

Json branch_failures_json(const std::vector<BranchFailure>& fs) {
  Json out = Json::array();
  for (const auto& f : fs) {
    out.push_back({{"offsets", f.selection.offsets},
                   {"reason", f.reason},
                   {"row", index_or_null(f.row)},
                   {"col", index_or_null(f.col)},
                   {"value", f.value},
                   {"borderline", f.borderline}});
  }
  return out;
}

}  // namespace

Json matrix_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json tolerances_json(const ToleranceConfig& cfg) {
  return {{"entry_tol", cfg.entry_tol},
          {"recon_tol", cfg.recon_tol},
          {"distinct_tol", cfg.distinct_tol},
          {"perturb_scale", cfg.perturb_scale},
          {"cond_ceiling", cfg.cond_ceiling}};
}

Json class_report_json(const ClassReport& r) {
  Json flags = Json::object();
  Json witnesses = Json::object();
  for (MatrixClass c : kAllClasses) {
    const std::string key(to_string(c));
    flags[key] = r[c];
    const Witness& w = r.witness(c);
    if (!w.index && w.note.empty() && !w.certificate) continue;
    Json wj = Json::object();
    if (w.index) wj["index"] = {w.index->first, w.index->second};
    if (!w.note.empty()) wj["note"] = w.note;
    if (w.certificate) wj["certificate"] = matrix_json(*w.certificate);
    witnesses[key] = std::move(wj);
  }
  return {{"flags", flags}, {"witnesses", witnesses}, {"det", r.det}, {"spectral_radius", r.spectral_radius}};
}

Json structure_json(const StructureDecomposition& d) {
  Json blocks = Json::array();
  for (const auto& b : d.diagonal_blocks) blocks.push_back(matrix_json(b));
  return {{"permutation", d.permutation},
          {"block_sizes", d.block_sizes},
          {"upper", matrix_json(d.upper)},
          {"diagonal_blocks", blocks}};
}

Json necessary_json(const NecessaryConditionReport& r) {
  Json violations = Json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"condition", v.condition},
                          {"row", index_or_null(v.row)},
                          {"col", index_or_null(v.col)},
                          {"block", index_or_null(v.block)},
                          {"detail", v.detail}});
  }
  return {{"passed", r.passed}, {"conditions_checked", r.conditions_checked}, {"violations", violations}};
}

Json bound_json(const BranchBound& b) {
  return {{"mode", std::string(to_string(b.mode))},
          {"im_low", b.im_low},
          {"im_high", b.im_high},
          {"perron_index", index_or_null(b.perron_index)},
          {"admissible", b.admissible},
          {"per_eigenvalue_counts", b.per_eigenvalue_counts},
          {"raw_tuple_count", b.raw_tuple_count}};
}

Json embed_json(const EmbeddabilityReport& r) {
  Json out{{"verdict", std::string(to_string(r.verdict))},
           {"method", r.method},
           {"generator", r.generator ? matrix_json(*r.generator) : Json(nullptr)},
           {"branches_examined", r.branches_examined},
           {"failed_conditions", failed_json(r.failed_conditions)},
           {"branch_failures", branch_failures_json(r.branch_failures)},
           {"perturbed", r.perturbed},
           {"perturbed_input", r.perturbed_input ? matrix_json(*r.perturbed_input) : Json(nullptr)},
           {"bound", bound_json(r.bound_used)}};
  return out;
}

Json divisibility_json(const DivisibilityReport& r) {
  Json roots = Json::array();
  for (const auto& root : r.roots_demonstrated) {
    roots.push_back({{"order", root.order},
                     {"root", matrix_json(root.root)},
                     {"nonnegative", root.nonnegative},
                     {"reconstruction_error", root.reconstruction_error}});
  }
  Json recursion = Json::array();
  for (const auto& sub : r.recursion) recursion.push_back(divisibility_json(sub));
  return {{"verdict", std::string(to_string(r.verdict))},
          {"method", r.method},
          {"z_matrix", r.z_matrix ? matrix_json(*r.z_matrix) : Json(nullptr)},
          {"roots_demonstrated", roots},
          {"recursion", recursion},
          {"branches_examined", r.branches_examined},
          {"failed_conditions", failed_json(r.failed_conditions)},
          {"branch_failures", branch_failures_json(r.branch_failures)},
          {"perturbed", r.perturbed},
          {"perturbed_input", r.perturbed_input ? matrix_json(*r.perturbed_input) : Json(nullptr)},
          {"bound", bound_json(r.bound_used)}};
}

}  // namespace embedlab::cli
