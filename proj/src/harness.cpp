#include "sgl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "sgl/meshgen.hpp"

namespace sgl {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double require_number(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  const char* s = t.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s, &end);
  if (end == s || *end != '\0' || errno == ERANGE || !std::isfinite(v))
    throw std::invalid_argument(what + ": not a finite number: '" + text +
                                "'");
  return v;
}

bool valid_id(const std::string& id) {
  if (id.empty()) return false;
  for (char c : id) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                    c == '-' || c == '.';
    if (!ok) return false;
  }
  return true;
}

double num_param(const CorpusEntry& e, const std::string& key, double dflt) {
  auto it = e.params.find(key);
  if (it == e.params.end()) return dflt;
  return require_number(it->second,
                        "corpus entry '" + e.id + "': parameter '" + key + "'");
}

int int_param(const CorpusEntry& e, const std::string& key, int dflt) {
  const double v = num_param(e, key, static_cast<double>(dflt));
  if (v != std::floor(v) || std::fabs(v) > 1e9)
    throw std::invalid_argument("corpus entry '" + e.id + "': parameter '" +
                                key + "' is not an integer");
  return static_cast<int>(v);
}

void check_param_keys(const CorpusEntry& e,
                      std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : e.params) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok)
      throw std::invalid_argument("corpus entry '" + e.id +
                                  "': unknown parameter '" + key +
                                  "' for source '" + e.source + "'");
  }
}

void require_positive(const CorpusEntry& e, const std::string& key, double v) {
  if (!(v > 0))
    throw std::invalid_argument("corpus entry '" + e.id + "': parameter '" +
                                key + "' must be positive, got " + fmt(v));
}

MeshDomain materialize_mesh(const CorpusEntry& e) {
  const std::string& s = e.source;
  if (s == "square") {
    check_param_keys(e, {"side", "n"});
    const double side = num_param(e, "side", 1.0);
    const int cells = int_param(e, "n", 128);
    require_positive(e, "side", side);
    require_positive(e, "n", cells);
    return make_rectangle(side, side, cells, cells);
  }
  if (s == "rectangle") {
    check_param_keys(e, {"width", "height", "nx", "ny"});
    const double w = num_param(e, "width", 1.0);
    const double h = num_param(e, "height", 1.0);
    const int nx = int_param(e, "nx", 128);
    const int ny = int_param(e, "ny", 128);
    require_positive(e, "width", w);
    require_positive(e, "height", h);
    require_positive(e, "nx", nx);
    require_positive(e, "ny", ny);
    return make_rectangle(w, h, nx, ny);
  }
  if (s == "disk") {
    check_param_keys(e, {"k", "R", "rings"});
    const double k = num_param(e, "k", 0.0);
    const double R = num_param(e, "R", 1.0);
    const int rings = int_param(e, "rings", 64);
    require_positive(e, "R", R);
    require_positive(e, "rings", rings);
    return make_disk(k, R, rings);
  }
  if (s == "ellipse") {
    check_param_keys(e, {"a", "b", "rings"});
    const double a = num_param(e, "a", 0.75);
    const double b = num_param(e, "b", 0.5);
    const int rings = int_param(e, "rings", 96);
    require_positive(e, "a", a);
    require_positive(e, "b", b);
    require_positive(e, "rings", rings);
    return make_ellipse(a, b, rings);
  }
  if (s == "hyperbolic-polygon") {
    check_param_keys(e, {"k", "sides", "circumradius", "rings"});
    const double k = num_param(e, "k", -1.0);
    const int sides = int_param(e, "sides", 5);
    const double rad = num_param(e, "circumradius", 1.0);
    const int rings = int_param(e, "rings", 72);
    if (!(k < 0))
      throw std::invalid_argument("corpus entry '" + e.id +
                                  "': hyperbolic-polygon needs k < 0");
    require_positive(e, "circumradius", rad);
    require_positive(e, "rings", rings);
    if (sides < 3)
      throw std::invalid_argument("corpus entry '" + e.id +
                                  "': polygon needs at least 3 sides");
    return make_hyperbolic_polygon(k, sides, rad, rings);
  }
  if (s == "spherical-cap") {
    check_param_keys(e, {"k", "R", "rings"});
    const double k = num_param(e, "k", 1.0);
    const double R = num_param(e, "R", 0.6);
    const int rings = int_param(e, "rings", 64);
    if (!(k > 0))
      throw std::invalid_argument("corpus entry '" + e.id +
                                  "': spherical-cap needs k > 0");
    require_positive(e, "R", R);
    require_positive(e, "rings", rings);
    return make_disk(k, R, rings);
  }
  // Anything that is not a generator name is a mesh file path.
  if (!e.params.empty())
    throw std::invalid_argument("corpus entry '" + e.id +
                                "': mesh file sources take no parameters");
  return load_mesh(s);
}

EntryOutcome run_one(const CorpusEntry& e, const Tolerances& tol) {
  EntryOutcome o;
  o.id = e.id;
  try {
    o.report = evaluate_entry(e, tol);
    o.status = o.report.verdict;
  } catch (const std::exception& ex) {
    o.status = "ineligible";
    o.error = ex.what();
  }
  o.unexpected = o.status != e.expected;
  return o;
}

std::string join_csv(const std::vector<std::string>& fields) {
  std::string row;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) row += ',';
    row += fields[i];
  }
  return row;
}

// An entry that never produced a report keeps its computed columns empty;
// the inputs that are known without evaluation (alpha, declared window) are
// echoed so the row stays self-describing.
std::string ineligible_row(const CorpusEntry& e) {
  std::vector<std::string> f(15);
  f[0] = e.id;
  f[4] = fmt(e.alpha);
  f[10] = "ineligible";
  if (e.window_given) {
    f[13] = fmt(e.K_lower);
    f[14] = fmt(e.k_upper);
  }
  return join_csv(f);
}

}  // namespace

GapTolerances Tolerances::gap() const {
  GapTolerances g;
  g.verdict_margin = verdict_margin;
  return g;  // balance and shooting keep the pipeline defaults
}

Tolerances parse_tolerances(std::istream& in, const std::string& origin) {
  Tolerances t;
  std::string raw;
  int line = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw std::runtime_error(origin + ": line " + std::to_string(line) +
                             ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    const size_t eq = s.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    double v = 0.0;
    try {
      v = require_number(value, "value of '" + key + "'");
    } catch (const std::invalid_argument& ex) {
      fail(ex.what());
    }
    if (!(v > 0)) fail("'" + key + "' must be positive");
    if (key == "eigen_residual")
      t.eigen_residual = v;
    else if (key == "verdict_margin")
      t.verdict_margin = v;
    else if (key == "sharpness_margin")
      t.sharpness_margin = v;
    else
      fail("unknown tolerance key '" + key + "'");
  }
  return t;
}

Tolerances load_tolerances() {
  const char* path = std::getenv("SGL_TOL_OVERRIDE");
  if (path == nullptr || *path == '\0') return Tolerances{};
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error(
        std::string("SGL_TOL_OVERRIDE: cannot open tolerance file '") + path +
        "'");
  return parse_tolerances(in, path);
}

std::vector<CorpusEntry> parse_corpus(std::istream& in,
                                      const std::string& origin) {
  std::vector<CorpusEntry> entries;
  std::set<std::string> seen_ids;
  std::set<std::string> seen_keys;
  CorpusEntry cur;
  bool open = false, have_K = false, have_k = false;
  std::string raw;
  int line = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw std::runtime_error(origin + ": line " + std::to_string(line) +
                             ": " + msg);
  };
  auto finish = [&]() -> void {
    if (!open) return;
    if (cur.source.empty()) fail("entry '" + cur.id + "' has no source");
    if (have_K != have_k)
      fail("entry '" + cur.id +
           "' declares only half a curvature window (need both K_lower and "
           "k_upper)");
    cur.window_given = have_K && have_k;
    entries.push_back(cur);
  };
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    const size_t eq = s.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail("empty key");
    if (key == "id") {
      finish();
      if (!valid_id(value))
        fail("id must be nonempty over [A-Za-z0-9_.-], got '" + value + "'");
      if (!seen_ids.insert(value).second) fail("duplicate id '" + value + "'");
      cur = CorpusEntry{};
      cur.id = value;
      open = true;
      have_K = have_k = false;
      seen_keys.clear();
      continue;
    }
    if (!open) fail("key '" + key + "' before any id");
    if (!seen_keys.insert(key).second)
      fail("duplicate key '" + key + "' in entry '" + cur.id + "'");
    if (key == "source") {
      if (value.empty()) fail("source must be nonempty");
      cur.source = value;
    } else if (key == "alpha") {
      try {
        cur.alpha = require_number(value, "alpha");
      } catch (const std::invalid_argument& ex) {
        fail(ex.what());
      }
      if (!(cur.alpha > 0)) fail("alpha must be positive");
    } else if (key == "expected") {
      if (value != "holds" && value != "violated" && value != "ineligible")
        fail("expected must be holds, violated, or ineligible");
      cur.expected = value;
    } else if (key == "K_lower") {
      try {
        cur.K_lower = require_number(value, "K_lower");
      } catch (const std::invalid_argument& ex) {
        fail(ex.what());
      }
      have_K = true;
    } else if (key == "k_upper") {
      try {
        cur.k_upper = require_number(value, "k_upper");
      } catch (const std::invalid_argument& ex) {
        fail(ex.what());
      }
      have_k = true;
    } else {
      cur.params[key] = value;
    }
  }
  finish();
  return entries;
}

std::vector<CorpusEntry> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open corpus config '" + path + "'");
  return parse_corpus(in, path);
}

std::string corpus_text(const std::vector<CorpusEntry>& entries) {
  std::ostringstream os;
  bool first = true;
  for (const CorpusEntry& e : entries) {
    if (!first) os << "\n";
    first = false;
    os << "id = " << e.id << "\n";
    os << "source = " << e.source << "\n";
    for (const auto& [key, value] : e.params)
      os << key << " = " << value << "\n";
    os << "alpha = " << fmt(e.alpha) << "\n";
    if (e.window_given) {
      os << "K_lower = " << fmt(e.K_lower) << "\n";
      os << "k_upper = " << fmt(e.k_upper) << "\n";
    }
    if (e.expected != "holds") os << "expected = " << e.expected << "\n";
  }
  return os.str();
}

std::vector<CorpusEntry> default_corpus() {
  auto mesh_entry = [](const char* id, const char* source,
                       std::map<std::string, std::string> params) {
    CorpusEntry e;
    e.id = id;
    e.source = source;
    e.params = std::move(params);
    return e;
  };
  std::vector<CorpusEntry> v;
  v.push_back(mesh_entry("square", "square", {{"side", "1"}, {"n", "128"}}));
  v.push_back(mesh_entry(
      "rectangle-1x2", "rectangle",
      {{"width", "1"}, {"height", "2"}, {"nx", "128"}, {"ny", "256"}}));
  v.push_back(mesh_entry("ellipse-3to2", "ellipse",
                         {{"a", "0.75"}, {"b", "0.5"}, {"rings", "96"}}));
  v.push_back(mesh_entry("pentagon-hyperbolic", "hyperbolic-polygon",
                         {{"k", "-1"},
                          {"sides", "5"},
                          {"circumradius", "1"},
                          {"rings", "72"}}));
  v.push_back(mesh_entry("cap-spherical", "spherical-cap",
                         {{"k", "1"}, {"R", "0.6"}, {"rings", "64"}}));
  CorpusEntry w;
  w.id = "warped-disk";
  w.source = "warped-disk";
  w.params = {{"curvature", "-0.6"}, {"R", "1"}};
  w.K_lower = -0.6;
  w.k_upper = 0.0;
  w.window_given = true;
  v.push_back(w);
  return v;
}

MeshDomain corpus_mesh(const CorpusEntry& entry) {
  if (entry.source == "warped-disk")
    throw std::invalid_argument("corpus entry '" + entry.id +
                                "': warped-disk entries have no mesh");
  return materialize_mesh(entry);
}

GapBoundReport evaluate_entry(const CorpusEntry& entry,
                              const Tolerances& tol) {
  if (entry.source.empty())
    throw std::invalid_argument("corpus entry '" + entry.id +
                                "' has no source");
  if (!(entry.alpha > 0))
    throw std::invalid_argument("corpus entry '" + entry.id +
                                "': alpha must be positive");
  if (entry.source == "warped-disk") {
    check_param_keys(entry, {"curvature", "R"});
    const double K = num_param(entry, "curvature", -0.6);
    const double R = num_param(entry, "R", 1.0);
    require_positive(entry, "R", R);
    if (K > 0 && R >= M_PI / std::sqrt(K))
      throw std::invalid_argument("corpus entry '" + entry.id +
                                  "': warp profile vanishes before R");
    WarpedSurface ws;
    ws.phi = [K](double r) { return sn(K, r); };
    ws.R_max = R;
    ws.K_lower = entry.window_given ? entry.K_lower : K;
    ws.k_upper = entry.window_given ? entry.k_upper : K;
    const WarpedSpectrum spec = warped_disk_spectrum(ws, R);
    if (spec.residual > tol.eigen_residual)
      throw std::runtime_error("corpus entry '" + entry.id +
                               "': warped solver residual " +
                               fmt(spec.residual) + " exceeds the " +
                               fmt(tol.eigen_residual) + " acceptance");
    return evaluate_bound(ws, R, entry.alpha, tol.gap());
  }
  const MeshDomain mesh = materialize_mesh(entry);
  const CurvaturePair window = entry.window_given
                                   ? CurvaturePair{entry.K_lower,
                                                   entry.k_upper}
                                   : CurvaturePair{mesh.k, mesh.k};
  return evaluate_bound(mesh, entry.alpha, window, tol.gap());
}

CorpusRun run_corpus(const std::vector<CorpusEntry>& entries,
                     const Tolerances& tol, int jobs) {
  {
    std::set<std::string> ids;
    for (const CorpusEntry& e : entries)
      if (!ids.insert(e.id).second)
        throw std::invalid_argument("duplicate corpus id '" + e.id + "'");
  }
  std::vector<EntryOutcome> results(entries.size());
  const int workers =
      std::max(1, std::min<int>(jobs, static_cast<int>(entries.size())));
  if (workers <= 1) {
    for (size_t i = 0; i < entries.size(); ++i)
      results[i] = run_one(entries[i], tol);
  } else {
    std::atomic<size_t> next{0};
    auto work = [&]() {
      for (size_t i; (i = next.fetch_add(1)) < entries.size();)
        results[i] = run_one(entries[i], tol);
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }

  std::vector<size_t> order(entries.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return results[a].id < results[b].id;
  });

  CorpusRun run;
  std::string csv = "id," + report_csv_header() + "\n";
  size_t id_width = 2;
  for (const CorpusEntry& e : entries) id_width = std::max(id_width, e.id.size());
  std::ostringstream tbl;
  tbl << std::left;
  tbl.width(static_cast<std::streamsize>(id_width + 2));
  tbl << "id";
  tbl.width(12);
  tbl << "status";
  tbl << "detail\n";
  for (size_t idx : order) {
    const CorpusEntry& e = entries[idx];
    const EntryOutcome& o = results[idx];
    run.rows.push_back(o);
    if (o.status == "holds")
      ++run.holds;
    else if (o.status == "violated")
      ++run.violated;
    else
      ++run.ineligible;
    if (o.unexpected) {
      run.any_unexpected = true;
      if (o.status == "ineligible")
        run.exit_code = exit_input_error;
      else if (run.exit_code == exit_success)
        run.exit_code = exit_verdict_failure;
    }
    if (o.status == "ineligible")
      csv += ineligible_row(e) + "\n";
    else
      csv += e.id + "," + report_csv_row(o.report) + "\n";

    tbl.width(static_cast<std::streamsize>(id_width + 2));
    tbl << o.id;
    tbl.width(12);
    tbl << o.status;
    if (o.status == "ineligible") {
      tbl << o.error;
    } else {
      char buf[48];
      std::snprintf(buf, sizeof buf, "slack = %+.6g", o.report.relative_slack);
      tbl << buf;
    }
    if (o.unexpected) tbl << " [expected " << e.expected << "]";
    tbl << "\n";
  }
  tbl << "counts: " << run.holds << " holds, " << run.violated
      << " violated, " << run.ineligible << " ineligible ("
      << entries.size() << " entries)\n";
  run.csv = std::move(csv);
  run.table = tbl.str();
  return run;
}

int cmd_verify_ball(int n, double k, double R, const Tolerances& tol,
                    std::ostream& out, std::ostream& err) {
  if (n < 2 || !std::isfinite(k) || !std::isfinite(R) || !(R > 0)) {
    err << "verify-ball: need dimension n >= 2, finite k, and R > 0\n";
    return exit_input_error;
  }
  try {
    const Spaceform sf{n, k};
    const GapTolerances gt = tol.gap();
    const BallSpectrum bs = ball_spectrum(sf, R, gt.shooting);
    const double res = std::max(bs.residual1, bs.residual2);
    if (res > tol.eigen_residual) {
      err << "verify-ball: solver residual " << fmt(res) << " exceeds the "
          << fmt(tol.eigen_residual) << " acceptance\n";
      return exit_input_error;
    }
    const GapBoundReport rep = ball_sharpness_report(sf, R, gt);
    out << "lambda1 = " << fmt(rep.lambda1) << "\n";
    out << "lambda2 = " << fmt(rep.lambda2) << "\n";
    out << "gap = " << fmt(rep.gap) << "\n";
    out << "bound = " << fmt(rep.bound_rhs) << "\n";
    out << "slack = " << fmt(rep.relative_slack) << "\n";
    const bool sharp = std::fabs(rep.relative_slack) <= tol.sharpness_margin;
    out << "sharp within " << fmt(tol.sharpness_margin)
        << ": " << (sharp ? "yes" : "no") << "\n";
    return sharp ? exit_success : exit_verdict_failure;
  } catch (const std::exception& ex) {
    err << "verify-ball: " << ex.what() << "\n";
    return exit_input_error;
  }
}

int cmd_verify_domain(const std::string& mesh_path, double alpha,
                      double K_lower, const std::string& out_path,
                      const Tolerances& tol, std::ostream& out,
                      std::ostream& err) {
  MeshDomain mesh;
  try {
    mesh = load_mesh(mesh_path);
  } catch (const std::exception& ex) {
    err << "verify-domain: " << ex.what() << "\n";
    return exit_input_error;
  }
  try {
    const GapBoundReport rep =
        evaluate_bound(mesh, alpha, CurvaturePair{K_lower, mesh.k}, tol.gap());
    const std::string text =
        report_csv_header() + "\n" + report_csv_row(rep) + "\n";
    out << text;
    if (!out_path.empty()) {
      std::ofstream f(out_path);
      if (!f) {
        err << "verify-domain: cannot open output file '" << out_path
            << "'\n";
        return exit_input_error;
      }
      f << text;
    }
    return rep.verdict == "holds" ? exit_success : exit_verdict_failure;
  } catch (const std::exception& ex) {
    err << "verify-domain: " << ex.what() << "\n";
    return exit_input_error;
  }
}

int cmd_corpus(const std::string& config_path, int jobs,
               const Tolerances& tol, std::ostream& out, std::ostream& err) {
  std::vector<CorpusEntry> entries;
  try {
    entries = config_path.empty() ? default_corpus() : load_corpus(config_path);
  } catch (const std::exception& ex) {
    err << "corpus: " << ex.what() << "\n";
    return exit_input_error;
  }
  CorpusRun run;
  try {
    run = run_corpus(entries, tol, jobs < 1 ? 1 : jobs);
  } catch (const std::exception& ex) {
    err << "corpus: " << ex.what() << "\n";
    return exit_input_error;
  }
  out << run.csv << "\n" << run.table;
  return run.exit_code;
}

}  // namespace sgl
