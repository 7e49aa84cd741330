#include "pmeround/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pmeround/rng.hpp"

namespace pmeround {

namespace {

using njson = nlohmann::ordered_json;

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void append_complex(std::string& out, const Cplx& z) {
  out += '[';
  out += format_real(z.real());
  out += ',';
  out += format_real(z.imag());
  out += ']';
}

void append_matrix(std::string& out, const Mat& m) {
  out += '[';
  for (int i = 0; i < m.rows(); ++i) {
    if (i) out += ',';
    out += '[';
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      append_complex(out, m(i, j));
    }
    out += ']';
  }
  out += ']';
}

void append_family(std::string& out, const MeasurementFamily& f) {
  out += '{';
  for (int x = 0; x < f.size(); ++x) {
    if (x) out += ',';
    out += '"';
    out += escape(f.questions[x]);
    out += "\":[";
    const Measurement& m = f.measurements[x];
    for (int a = 0; a < m.size(); ++a) {
      if (a) out += ',';
      append_matrix(out, m.elements[a]);
    }
    out += ']';
  }
  out += '}';
}

void append_rng(std::string& out, std::uint64_t seed) {
  out += "\"rng\":{\"algorithm\":\"";
  out += kRngAlgorithm;
  out += "\",\"seed\":";
  out += std::to_string(seed);
  out += '}';
}

void append_label_array(std::string& out, const std::vector<std::string>& labels) {
  out += '[';
  for (size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ',';
    out += '"';
    out += escape(labels[i]);
    out += '"';
  }
  out += ']';
}

const njson& member(const njson& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    fail(ErrorCode::ParseError, std::string("missing field: ") + key);
  return *it;
}

Real as_real(const njson& j, const char* what) {
  if (!j.is_number())
    fail(ErrorCode::ParseError, std::string(what) + " is not a number");
  return j.get<Real>();
}

Cplx parse_complex(const njson& j) {
  if (!j.is_array() || j.size() != 2)
    fail(ErrorCode::ParseError, "complex entry is not an [re, im] pair");
  return Cplx(as_real(j[0], "real part"), as_real(j[1], "imaginary part"));
}

Mat parse_matrix(const njson& j) {
  if (!j.is_array() || j.empty())
    fail(ErrorCode::ParseError, "matrix is not a nonempty array of rows");
  const size_t rows = j.size();
  const size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) fail(ErrorCode::ParseError, "matrix row is empty");
  Mat m(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      fail(ErrorCode::ParseError, "matrix rows have unequal lengths");
    for (size_t k = 0; k < cols; ++k) m(i, k) = parse_complex(j[i][k]);
  }
  return m;
}

std::vector<std::string> parse_labels(const njson& j, const char* what) {
  if (!j.is_array() || j.empty())
    fail(ErrorCode::ParseError, std::string(what) + " is not a nonempty array");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string())
      fail(ErrorCode::ParseError, std::string(what) + " has a non-string entry");
    out.push_back(e.get<std::string>());
  }
  return out;
}

MeasurementFamily parse_family(const njson& j, const char* side) {
  if (!j.is_object() || j.empty())
    fail(ErrorCode::ParseError, std::string(side) + " is not a nonempty object");
  MeasurementFamily f;
  for (auto it = j.begin(); it != j.end(); ++it) {
    f.questions.push_back(it.key());
    const njson& mats = it.value();
    if (!mats.is_array() || mats.empty())
      fail(ErrorCode::ParseError, std::string(side) + " question has no elements");
    Measurement m;
    m.kind = MeasurementKind::general;
    for (size_t a = 0; a < mats.size(); ++a) {
      m.outcomes.push_back(std::to_string(a));
      m.elements.push_back(parse_matrix(mats[a]));
    }
    f.measurements.push_back(std::move(m));
  }
  return f;
}

njson parse_root(const std::string& text) {
  njson j = njson::parse(text, nullptr, false);
  if (j.is_discarded()) fail(ErrorCode::ParseError, "malformed JSON");
  if (!j.is_object()) fail(ErrorCode::ParseError, "JSON root is not an object");
  return j;
}

}  // namespace

std::string format_real(Real v) {
  if (v == 0.0) return "0";  // canonical zero; JSON parsers drop the sign bit
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string strategy_to_json(const Strategy& s) {
  std::string out;
  out += "{\"d_a\":";
  out += std::to_string(s.state.d_a);
  out += ",\"d_b\":";
  out += std::to_string(s.state.d_b);
  out += ",\"state\":[";
  for (int i = 0; i < s.state.amplitudes.size(); ++i) {
    if (i) out += ',';
    append_complex(out, s.state.amplitudes(i));
  }
  out += "],\"alice\":";
  append_family(out, s.alice);
  out += ",\"bob\":";
  append_family(out, s.bob);
  out += "}\n";
  return out;
}

Strategy strategy_from_json(const std::string& text) {
  njson j = parse_root(text);
  const njson& da_j = member(j, "d_a");
  const njson& db_j = member(j, "d_b");
  if (!da_j.is_number_integer() || !db_j.is_number_integer())
    fail(ErrorCode::ParseError, "d_a and d_b must be integers");
  int da = da_j.get<int>();
  int db = db_j.get<int>();
  if (da <= 0 || db <= 0) fail(ErrorCode::ParseError, "dimensions must be positive");

  const njson& state = member(j, "state");
  if (!state.is_array() || static_cast<int>(state.size()) != da * db)
    fail(ErrorCode::ParseError, "state length differs from d_a * d_b");
  Vec amp(static_cast<Eigen::Index>(da) * db);
  for (int i = 0; i < da * db; ++i) amp(i) = parse_complex(state[i]);

  Strategy s;
  s.state = BipartiteState(da, db, std::move(amp));
  s.alice = parse_family(member(j, "alice"), "alice");
  s.bob = parse_family(member(j, "bob"), "bob");
  if (s.alice.dim() != da || s.bob.dim() != db)
    fail(ErrorCode::DimensionMismatch, "measurement dimension differs from the state");
  return s;
}

std::string game_to_json(const NonlocalGame& g) {
  std::string out;
  out += "{\"x_labels\":";
  append_label_array(out, g.x_labels);
  out += ",\"y_labels\":";
  append_label_array(out, g.y_labels);
  out += ",\"a_labels\":";
  append_label_array(out, g.a_labels);
  out += ",\"b_labels\":";
  append_label_array(out, g.b_labels);
  out += ",\"nu\":[";
  for (int x = 0; x < g.nx(); ++x) {
    if (x) out += ',';
    out += '[';
    for (int y = 0; y < g.ny(); ++y) {
      if (y) out += ',';
      out += format_real(g.nu(x, y));
    }
    out += ']';
  }
  out += "],\"d\":[";
  for (int x = 0; x < g.nx(); ++x) {
    if (x) out += ',';
    out += '[';
    for (int y = 0; y < g.ny(); ++y) {
      if (y) out += ',';
      out += '[';
      for (int a = 0; a < g.na(); ++a) {
        if (a) out += ',';
        out += '[';
        for (int b = 0; b < g.nb(); ++b) {
          if (b) out += ',';
          out += g.predicate(x, y, a, b) ? '1' : '0';
        }
        out += ']';
      }
      out += ']';
    }
    out += ']';
  }
  out += "]}\n";
  return out;
}

NonlocalGame game_from_json(const std::string& text) {
  njson j = parse_root(text);
  NonlocalGame g;
  g.x_labels = parse_labels(member(j, "x_labels"), "x_labels");
  g.y_labels = parse_labels(member(j, "y_labels"), "y_labels");
  g.a_labels = parse_labels(member(j, "a_labels"), "a_labels");
  g.b_labels = parse_labels(member(j, "b_labels"), "b_labels");

  const njson& nu = member(j, "nu");
  if (!nu.is_array() || static_cast<int>(nu.size()) != g.nx())
    fail(ErrorCode::ParseError, "nu row count differs from x_labels");
  g.nu = RMat(g.nx(), g.ny());
  Real total = 0.0;
  for (int x = 0; x < g.nx(); ++x) {
    if (!nu[x].is_array() || static_cast<int>(nu[x].size()) != g.ny())
      fail(ErrorCode::ParseError, "nu column count differs from y_labels");
    for (int y = 0; y < g.ny(); ++y) {
      g.nu(x, y) = as_real(nu[x][y], "nu entry");
      if (g.nu(x, y) < 0.0)
        fail(ErrorCode::InvalidArgument, "nu has a negative entry");
      total += g.nu(x, y);
    }
  }
  if (std::abs(total - 1.0) > tol::distribution)
    fail(ErrorCode::InvalidArgument, "nu does not sum to one");

  const njson& d = member(j, "d");
  if (!d.is_array() || static_cast<int>(d.size()) != g.nx())
    fail(ErrorCode::ParseError, "d shape differs from the label sets");
  g.d.assign(static_cast<size_t>(g.nx()) * g.ny() * g.na() * g.nb(), 0);
  for (int x = 0; x < g.nx(); ++x) {
    if (!d[x].is_array() || static_cast<int>(d[x].size()) != g.ny())
      fail(ErrorCode::ParseError, "d shape differs from the label sets");
    for (int y = 0; y < g.ny(); ++y) {
      if (!d[x][y].is_array() || static_cast<int>(d[x][y].size()) != g.na())
        fail(ErrorCode::ParseError, "d shape differs from the label sets");
      for (int a = 0; a < g.na(); ++a) {
        if (!d[x][y][a].is_array() || static_cast<int>(d[x][y][a].size()) != g.nb())
          fail(ErrorCode::ParseError, "d shape differs from the label sets");
        for (int b = 0; b < g.nb(); ++b) {
          const njson& v = d[x][y][a][b];
          if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1))
            fail(ErrorCode::ParseError, "d entries must be 0 or 1");
          g.d[static_cast<size_t>(((x * g.ny() + y) * g.na() + a)) * g.nb() + b] =
              static_cast<std::uint8_t>(v.get<int>());
        }
      }
    }
  }
  return g;
}

namespace {

MeasurementFamily align_family(const MeasurementFamily& f,
                               const std::vector<std::string>& questions,
                               const std::vector<std::string>& outcomes,
                               const char* side) {
  if (f.size() != static_cast<int>(questions.size()))
    fail(ErrorCode::LabelMismatch,
         std::string(side) + " question count differs from the game");
  MeasurementFamily out;
  out.questions = questions;
  for (const auto& q : questions) {
    int found = -1;
    for (int x = 0; x < f.size(); ++x)
      if (f.questions[x] == q) {
        if (found >= 0)
          fail(ErrorCode::LabelMismatch, std::string(side) + " question duplicated: " + q);
        found = x;
      }
    if (found < 0)
      fail(ErrorCode::LabelMismatch, std::string(side) + " question missing: " + q);
    Measurement m = f.measurements[found];
    if (m.size() != static_cast<int>(outcomes.size()))
      fail(ErrorCode::LabelMismatch,
           std::string(side) + " outcome count differs from the game");
    m.outcomes = outcomes;
    out.measurements.push_back(std::move(m));
  }
  return out;
}

}  // namespace

Strategy align_strategy_with_game(const Strategy& s, const NonlocalGame& g) {
  Strategy out;
  out.state = s.state;
  out.alice = align_family(s.alice, g.x_labels, g.a_labels, "Alice");
  out.bob = align_family(s.bob, g.y_labels, g.b_labels, "Bob");
  return out;
}

std::string game_report_to_json(const GameReport& r, std::uint64_t seed) {
  std::string out;
  out += "{\"value\":";
  out += format_real(r.value);
  out += ",\"delta_sync_diag\":";
  out += r.delta_sync_diag ? format_real(*r.delta_sync_diag) : "null";
  out += ",\"synchronous\":";
  out += r.synchronous ? "true" : "false";
  out += ",\"projection\":";
  out += r.projection ? "true" : "false";
  out += ",\"symmetric\":";
  out += r.symmetric ? "true" : "false";
  out += ',';
  append_rng(out, seed);
  out += "}\n";
  return out;
}

std::string decomposition_report_to_json(const DecompositionReport& r, std::uint64_t seed) {
  const DecompositionDiagnostics& dg = r.decomposition.diagnostics;
  std::string out;
  out += "{\"weights\":[";
  for (size_t k = 0; k < r.decomposition.ladder.weights.size(); ++k) {
    if (k) out += ',';
    out += format_real(r.decomposition.ladder.weights[k]);
  }
  out += "],\"ranks\":[";
  for (size_t k = 0; k < r.decomposition.ladder.ranks.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(r.decomposition.ladder.ranks[k]);
  }
  out += "],\"diagnostics\":{\"delta_sync_in\":";
  out += format_real(dg.delta_sync_in);
  out += ",\"delta_prime\":";
  out += format_real(dg.delta_prime);
  out += ",\"commutation_defect\":";
  out += format_real(dg.commutation_defect);
  out += ",\"residual\":";
  out += format_real(dg.residual);
  out += ",\"reconstruction_error\":";
  out += format_real(dg.reconstruction_error);
  out += "},\"per_step_values\":[";
  for (size_t k = 0; k < r.per_step_values.size(); ++k) {
    if (k) out += ',';
    out += format_real(r.per_step_values[k]);
  }
  out += ']';
  // Optional game-level summary; fixed key set, null when not computed.
  out += ",\"mixture_value\":";
  out += r.mixture_value ? format_real(*r.mixture_value) : "null";
  out += ",\"epsilon\":";
  out += r.epsilon ? format_real(*r.epsilon) : "null";
  out += ",\"self_consistency\":";
  out += r.self_consistency ? format_real(*r.self_consistency) : "null";
  out += ",\"l1_gap\":";
  out += r.l1_gap ? format_real(*r.l1_gap) : "null";
  out += ',';
  append_rng(out, seed);
  out += "}\n";
  return out;
}

std::string sweep_to_csv(const SweepResult& r) {
  std::string out =
      "level,epsilon,delta_sync,delta_prime,commutation_defect,residual,l1_gap,"
      "mixture_value\n";
  for (const auto& row : r.rows) {
    out += format_real(row.level);
    out += ',';
    out += format_real(row.epsilon);
    out += ',';
    out += format_real(row.delta_sync);
    out += ',';
    out += format_real(row.delta_prime);
    out += ',';
    out += format_real(row.commutation_defect);
    out += ',';
    out += format_real(row.residual);
    out += ',';
    out += format_real(row.l1_gap);
    out += ',';
    out += format_real(row.mixture_value);
    out += '\n';
  }
  out += "# rng=";
  out += kRngAlgorithm;
  out += " seed=";
  out += std::to_string(r.seed);
  out += '\n';
  for (const auto& fit : {r.residual_fit, r.mixture_fit}) {
    if (!fit) continue;
    out += "# fit c=";
    out += format_real(fit->c);
    out += " C=";
    out += format_real(fit->C);
    out += '\n';
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::InvalidArgument, "cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::InvalidArgument, "cannot write file: " + path);
  out << contents;
  if (!out) fail(ErrorCode::InvalidArgument, "write failed: " + path);
}

}  // namespace pmeround
