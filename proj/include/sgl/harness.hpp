#pragma once

// Reproducible experiment plumbing: centralized tolerances, corpus
// configuration as flat key = value text, deterministic CSV emission with
// per-entry error capture, and the command entry points behind the CLI.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sgl/gap_bound.hpp"

namespace sgl {

// Exit-code contract shared by every command.
inline constexpr int exit_success = 0;
inline constexpr int exit_verdict_failure = 1;
inline constexpr int exit_input_error = 2;

/// Central tolerance knobs with documented defaults: eigenvalue-solver
/// residual acceptance 1e-8, verdict margin 1%, ball sharpness margin 2%.
/// The residual gate is enforced on the radial pipelines, whose reports
/// expose residuals; the FEM solver certifies its own residuals against the
/// same default internally.
struct Tolerances {
  double eigen_residual = 1e-8;
  double verdict_margin = 0.01;
  double sharpness_margin = 0.02;

  GapTolerances gap() const;  // translation into the pipeline knobs
};

/// key = value lines, '#' comments; keys eigen_residual, verdict_margin,
/// sharpness_margin. Unknown keys and non-positive values are errors
/// (1-based line numbers, prefixed with origin).
Tolerances parse_tolerances(std::istream& in, const std::string& origin);

/// Defaults, overridden by the file named in SGL_TOL_OVERRIDE when set.
Tolerances load_tolerances();

/// One corpus row: a built-in generator (square / rectangle / disk /
/// ellipse / hyperbolic-polygon / spherical-cap / warped-disk) or an
/// SGLMESH file path, plus flat string parameters. When no curvature
/// window is given it collapses to the source's native curvature.
struct CorpusEntry {
  std::string id;
  std::string source;
  std::map<std::string, std::string> params;
  double alpha = 1.0;
  double K_lower = 0.0;
  double k_upper = 0.0;
  bool window_given = false;
  std::string expected = "holds";  // "holds", "violated", or "ineligible"
};

/// Flat key = value config. Each entry starts at an `id` line; blank lines
/// and '#' comments are ignored. Recognized keys: id, source, alpha,
/// K_lower, k_upper (both or neither), expected; anything else becomes a
/// generator parameter. Errors carry 1-based line numbers.
std::vector<CorpusEntry> parse_corpus(std::istream& in,
                                      const std::string& origin);
std::vector<CorpusEntry> load_corpus(const std::string& path);

/// Inverse of parse_corpus for the supported keys (used to ship the
/// default corpus as a file that stays in sync with the built-in list).
std::string corpus_text(const std::vector<CorpusEntry>& entries);

/// Built-in six-domain verification corpus: unit square, 1 x 2 rectangle,
/// a/b = 1.5 ellipse, regular hyperbolic pentagon, spherical cap R = 0.6,
/// and the warped disk with curvature window [-0.6, 0]. Mesh resolutions
/// are chosen fine enough that the downstream crossing diagnostics resolve
/// within their default bands.
std::vector<CorpusEntry> default_corpus();

/// Materialize one entry and run the full pipeline (mesh generators and
/// file sources through the FEM path, warped-disk through the radial
/// path). Throws on unknown generators, bad parameters, or any pipeline
/// eligibility failure.
GapBoundReport evaluate_entry(const CorpusEntry& entry,
                              const Tolerances& tol);

/// The mesh a non-warped entry evaluates (generator or file source), so
/// diagnostics can drive the same domains the corpus run sees. Throws
/// std::invalid_argument for warped-disk entries, which have no mesh.
MeshDomain corpus_mesh(const CorpusEntry& entry);

struct EntryOutcome {
  std::string id;
  std::string status;       // "holds", "violated", or "ineligible"
  std::string error;        // diagnostic when ineligible
  bool unexpected = false;  // status differs from the declared expectation
  GapBoundReport report;    // valid unless status == "ineligible"
};

struct CorpusRun {
  std::vector<EntryOutcome> rows;  // sorted by id
  int holds = 0;
  int violated = 0;
  int ineligible = 0;
  bool any_unexpected = false;
  std::string csv;    // "id," + report columns; byte-deterministic
  std::string table;  // human-readable status table with a counts line
  int exit_code = exit_success;
};

/// Evaluate all entries (jobs > 1 runs them on worker threads), then merge
/// the buffered per-entry results in id order, so the CSV is byte-identical
/// across runs and thread counts. Per-entry errors are captured in the row,
/// never thrown. Exit code: 0 when every status matches its expectation,
/// otherwise 2 if any mismatched entry failed eligibility, else 1.
CorpusRun run_corpus(const std::vector<CorpusEntry>& entries,
                     const Tolerances& tol, int jobs = 1);

/// Radial sharpness check on the geodesic R-ball in N(k), dimension n:
/// prints lambda1, lambda2, gap, bound, slack; exit 0 iff the solver
/// residuals pass and |slack| <= sharpness_margin.
int cmd_verify_ball(int n, double k, double R, const Tolerances& tol,
                    std::ostream& out, std::ostream& err);

/// Full pipeline on a mesh file with curvature window [K_lower, chart k]:
/// CSV header + row to `out` and optionally to out_path. Exit 0 on
/// "holds", 1 on "violated", 2 on parse or eligibility errors.
int cmd_verify_domain(const std::string& mesh_path, double alpha,
                      double K_lower, const std::string& out_path,
                      const Tolerances& tol, std::ostream& out,
                      std::ostream& err);

/// Corpus run: CSV block, then the summary table. Empty config_path runs
/// the built-in default corpus.
int cmd_corpus(const std::string& config_path, int jobs,
               const Tolerances& tol, std::ostream& out, std::ostream& err);

}  // namespace sgl
