#include "narrascope/session/snapshot_json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "narrascope/error.hpp"

namespace narrascope::session {
namespace {

using ojson = nlohmann::ordered_json;

[[noreturn]] void bad_doc(const std::string& what) {
  throw Error(ErrorKind::kInvalidArgument, "snapshot document: " + what);
}

void append_double(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string_view text(buf, static_cast<std::size_t>(res.ptr - buf));
  out += text;
  if (text.find_first_of(".e") == std::string_view::npos) out += ".0";
}

void dump_into(std::string& out, const ojson& j, int depth) {
  const auto pad = [&](int d) { out.append(static_cast<std::size_t>(d) * 2, ' '); };
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        pad(depth + 1);
        out += ojson(key).dump();
        out += ": ";
        dump_into(out, value, depth + 1);
      }
      out += '\n';
      pad(depth);
      out += '}';
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(), [](const ojson& e) {
        return e.is_structured();
      });
      if (flat) {
        out += '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump_into(out, j[i], depth + 1);
        }
        out += ']';
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        pad(depth + 1);
        dump_into(out, j[i], depth + 1);
      }
      out += '\n';
      pad(depth);
      out += ']';
      return;
    }
    case ojson::value_t::number_float:
      append_double(out, j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

ojson matrix_to_json(const ca::Matrix& m) {
  ojson rows = ojson::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    ojson row = ojson::array();
    for (double v : m.row(r)) row.push_back(v);
    rows.push_back(std::move(row));
  }
  return rows;
}

ca::Matrix matrix_from_json(const nlohmann::json& j, std::size_t rows,
                            std::size_t cols, const char* name) {
  if (!j.is_array() || j.size() != rows) {
    bad_doc(std::string(name) + " must have " + std::to_string(rows) + " rows");
  }
  std::vector<double> data;
  data.reserve(rows * cols);
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != cols) {
      bad_doc(std::string(name) + " rows must have " + std::to_string(cols) + " entries");
    }
    for (const auto& v : row) data.push_back(v.get<double>());
  }
  return ca::Matrix(rows, cols, std::move(data));
}

ojson params_to_json(const AnalysisParams& p) {
  ojson j;
  j["window"] = window_to_json(p.window);
  j["k"] = p.k;
  j["dims"] = p.dims;
  j["tagger"] = p.tagger;
  j["coordinate_mode"] = std::string(ca::to_string(p.coordinate_mode));
  return j;
}

AnalysisParams params_from_json(const nlohmann::json& j) {
  AnalysisParams p;
  p.window = window_from_json(j.at("window"));
  p.k = j.at("k").get<std::size_t>();
  p.dims = j.at("dims").get<std::size_t>();
  p.tagger = j.at("tagger").get<std::string>();
  const auto mode = ca::parse_coordinate_mode(j.at("coordinate_mode").get<std::string>());
  if (!mode) bad_doc("unknown coordinate_mode");
  p.coordinate_mode = *mode;
  return p;
}

}  // namespace

std::string canonical_dump(const nlohmann::ordered_json& doc) {
  std::string out;
  dump_into(out, doc, 0);
  return out;
}

nlohmann::ordered_json snapshot_to_json(const AnalysisSnapshot& s) {
  ojson j;
  j["schema_version"] = std::string(kSnapshotSchemaVersion);
  j["sequence_number"] = s.sequence_number;
  j["created_at"] = ingest::format_timestamp(s.created_at);
  j["post_count"] = s.post_count;
  j["store_prefix"] = s.store_prefix;
  j["params"] = params_to_json(s.params);
  j["exclusions_in_effect"] = ojson::array();
  for (const auto& e : s.exclusions_in_effect) j["exclusions_in_effect"].push_back(e);

  ojson table;
  table["row_labels"] = s.table.row_labels();
  table["col_labels"] = s.table.col_labels();
  ojson counts = ojson::array();
  for (std::size_t i = 0; i < s.table.rows(); ++i) {
    ojson row = ojson::array();
    for (std::size_t c = 0; c < s.table.cols(); ++c) row.push_back(s.table.count(i, c));
    counts.push_back(std::move(row));
  }
  table["counts"] = std::move(counts);
  table["grand_total"] = s.table.grand_total();
  j["table"] = std::move(table);

  const auto& r = s.ca.residuals;
  ojson ca;
  ca["coordinate_mode"] = std::string(ca::to_string(s.ca.coordinate_mode));
  ca["dims"] = s.ca.dims();
  ca["chi_square"] = r.chi_square;
  ca["grand_total"] = r.grand_total;
  ca["singular_values"] = s.ca.singular_values;
  ca["inertia_share"] = s.ca.inertia_share;
  ca["row_mass"] = r.row_mass;
  ca["col_mass"] = r.col_mass;
  ca["row_coords"] = matrix_to_json(s.ca.row_coords);
  ca["col_coords"] = matrix_to_json(s.ca.col_coords);
  ca["residuals"] = matrix_to_json(r.values);
  ca["expected"] = matrix_to_json(r.expected);
  j["ca"] = std::move(ca);

  j["plot_radius"] = s.plot_radius;
  j["candidates"] = ojson::array();
  for (const auto& c : s.candidates) {
    ojson cj;
    cj["verb"] = c.verb;
    cj["noun"] = c.noun;
    cj["score"] = c.score;
    cj["cosine"] = c.cosine;
    cj["verb_norm"] = c.verb_norm;
    cj["noun_norm"] = c.noun_norm;
    j["candidates"].push_back(std::move(cj));
  }
  j["pruned_terms"] = ojson::array();
  for (const auto& p : s.pruned_terms) {
    ojson pj;
    pj["lemma"] = p.lemma;
    pj["role"] = p.role;
    j["pruned_terms"].push_back(std::move(pj));
  }
  return j;
}

AnalysisSnapshot snapshot_from_json(const nlohmann::json& j) {
  if (!j.is_object()) bad_doc("not an object");
  if (j.value("schema_version", std::string()) != kSnapshotSchemaVersion) {
    bad_doc("unsupported schema_version");
  }
  AnalysisSnapshot s;
  try {
    s.sequence_number = j.at("sequence_number").get<std::uint64_t>();
    s.created_at = ingest::parse_timestamp(j.at("created_at").get<std::string>());
    s.post_count = j.at("post_count").get<std::size_t>();
    s.store_prefix = j.at("store_prefix").get<std::size_t>();
    s.params = params_from_json(j.at("params"));
    for (const auto& e : j.at("exclusions_in_effect")) {
      s.exclusions_in_effect.insert(e.get<std::string>());
    }

    const auto& t = j.at("table");
    auto rows = t.at("row_labels").get<std::vector<std::string>>();
    auto cols = t.at("col_labels").get<std::vector<std::string>>();
    std::vector<std::int64_t> counts;
    const auto& cj = t.at("counts");
    if (!cj.is_array() || cj.size() != rows.size()) bad_doc("counts shape");
    for (const auto& row : cj) {
      if (!row.is_array() || row.size() != cols.size()) bad_doc("counts shape");
      for (const auto& v : row) counts.push_back(v.get<std::int64_t>());
    }
    const std::size_t R = rows.size();
    const std::size_t C = cols.size();
    s.table = cooccur::ContingencyTable(std::move(rows), std::move(cols), std::move(counts));

    const auto& a = j.at("ca");
    const auto mode = ca::parse_coordinate_mode(a.at("coordinate_mode").get<std::string>());
    if (!mode) bad_doc("unknown coordinate_mode");
    s.ca.coordinate_mode = *mode;
    const auto dims = a.at("dims").get<std::size_t>();
    auto& r = s.ca.residuals;
    r.chi_square = a.at("chi_square").get<double>();
    r.grand_total = a.at("grand_total").get<double>();
    r.row_mass = a.at("row_mass").get<std::vector<double>>();
    r.col_mass = a.at("col_mass").get<std::vector<double>>();
    r.values = matrix_from_json(a.at("residuals"), R, C, "residuals");
    r.expected = matrix_from_json(a.at("expected"), R, C, "expected");
    s.ca.singular_values = a.at("singular_values").get<std::vector<double>>();
    s.ca.inertia_share = a.at("inertia_share").get<std::vector<double>>();
    s.ca.row_coords = matrix_from_json(a.at("row_coords"), R, dims, "row_coords");
    s.ca.col_coords = matrix_from_json(a.at("col_coords"), C, dims, "col_coords");

    s.plot_radius = j.at("plot_radius").get<double>();
    for (const auto& c : j.at("candidates")) {
      s.candidates.push_back({c.at("verb").get<std::string>(),
                              c.at("noun").get<std::string>(),
                              c.at("score").get<double>(),
                              c.at("cosine").get<double>(),
                              c.at("verb_norm").get<double>(),
                              c.at("noun_norm").get<double>()});
    }
    for (const auto& p : j.at("pruned_terms")) {
      s.pruned_terms.push_back({p.at("lemma").get<std::string>(),
                                p.at("role").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    bad_doc(e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kInvalidArgument) throw;
    bad_doc(e.what());
  }
  return s;
}

std::string export_snapshot(const AnalysisSnapshot& snapshot) {
  return canonical_dump(snapshot_to_json(snapshot)) + "\n";
}

AnalysisSnapshot import_snapshot(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    bad_doc(e.what());
  }
  return snapshot_from_json(doc);
}

}  // namespace narrascope::session
