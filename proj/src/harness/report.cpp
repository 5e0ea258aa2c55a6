#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bsdtwist/error.hpp"
#include "bsdtwist/harness.hpp"

namespace bsdtwist {

namespace {

using json = nlohmann::ordered_json;

std::string b2s(bool b) { return b ? "true" : "false"; }

bool s2b(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw Error(Errc::ParseError, "expected true or false, found '" + s + "'");
}

long s2l(const std::string& s) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) throw Error(Errc::ParseError, "expected an integer, found '" + s + "'");
  return v;
}

Int s2z(const std::string& s) {
  Int v;
  if (s.empty() || v.set_str(s, 10) != 0) throw Error(Errc::ParseError, "expected an integer, found '" + s + "'");
  return v;
}

Rat s2q(const std::string& s) {
  Rat v;
  if (s.empty() || v.set_str(s, 10) != 0) throw Error(Errc::ParseError, "expected a rational, found '" + s + "'");
  v.canonicalize();
  return v;
}

void check_width(const std::vector<std::string>& v, std::size_t n) {
  if (v.size() != n)
    throw Error(Errc::ParseError, "expected " + std::to_string(n) + " fields, found " + std::to_string(v.size()));
}

// Column kinds for JSON typing: i integer, b boolean, q rational (as a string), s string.
const char* kinds(const ReportRow*) { return "sliiiibbbbs"; }
const char* kinds(const StarRow*) { return "sliiiibbs"; }
const char* kinds(const ParityRow*) { return "sliiqiiibs"; }
const char* kinds(const SquarenessRecord*) { return "lliqqiqqqqqbbbbbs"; }

json typed(char kind, const std::string& v) {
  switch (kind) {
    case 'b': return v == "true";
    case 'i': {
      if (v.empty()) return nullptr;
      Int z = s2z(v);
      if (z.fits_slong_p()) return z.get_si();
      return v;
    }
    case 'l': return s2l(v);
    default: return v;
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// One CSV record; returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& out) {
  out.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string cur;
  bool quoted = false;
  for (int c; (c = in.get()) != std::char_traits<char>::eof();) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          cur += '"';
          in.get();
        } else {
          quoted = false;
        }
      } else {
        cur += static_cast<char>(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      cur += static_cast<char>(c);
    }
  }
  if (quoted) throw Error(Errc::ParseError, "unterminated quoted field");
  out.push_back(cur);
  return true;
}

std::string z2s(const Int& z) { return z.get_str(); }
std::string q2s(const Rat& q) { return q.get_str(); }

}  // namespace

const std::vector<std::string>& ReportRow::fields() {
  static const std::vector<std::string> f = {"label",
                                             "D",
                                             "twist_conductor",
                                             "torsion",
                                             "cp",
                                             "sha_an",
                                             "conj25_holds",
                                             "conj25_odd_part_divides_cp",
                                             "conj25_strict",
                                             "torsion_sq_divides_cp",
                                             "notes"};
  return f;
}

std::vector<std::string> ReportRow::values() const {
  return {label,
          std::to_string(D),
          z2s(twist_conductor),
          std::to_string(torsion),
          z2s(cp),
          z2s(sha_an),
          b2s(conj25_holds),
          b2s(conj25_odd_part_divides_cp),
          b2s(conj25_strict),
          b2s(torsion_sq_divides_cp),
          notes};
}

ReportRow ReportRow::from_values(const std::vector<std::string>& v) {
  check_width(v, fields().size());
  ReportRow r;
  r.label = v[0];
  r.D = s2l(v[1]);
  r.twist_conductor = s2z(v[2]);
  r.torsion = s2l(v[3]);
  r.cp = s2z(v[4]);
  r.sha_an = s2z(v[5]);
  r.conj25_holds = s2b(v[6]);
  r.conj25_odd_part_divides_cp = s2b(v[7]);
  r.conj25_strict = s2b(v[8]);
  r.torsion_sq_divides_cp = s2b(v[9]);
  r.notes = v[10];
  return r;
}

const std::vector<std::string>& StarRow::fields() {
  static const std::vector<std::string> f = {"label", "conductor", "p", "sha_an", "D",
                                             "twist_sha_an", "found", "p_divides_twist_sha", "notes"};
  return f;
}

std::vector<std::string> StarRow::values() const {
  return {label,
          std::to_string(conductor),
          std::to_string(p),
          z2s(sha_an),
          std::to_string(D),
          found ? z2s(twist_sha_an) : "",
          b2s(found),
          b2s(p_divides_twist_sha),
          notes};
}

StarRow StarRow::from_values(const std::vector<std::string>& v) {
  check_width(v, fields().size());
  StarRow r;
  r.label = v[0];
  r.conductor = s2l(v[1]);
  r.p = s2l(v[2]);
  r.sha_an = s2z(v[3]);
  r.D = s2l(v[4]);
  if (!v[5].empty()) r.twist_sha_an = s2z(v[5]);
  r.found = s2b(v[6]);
  r.p_divides_twist_sha = s2b(v[7]);
  r.notes = v[8];
  return r;
}

const std::vector<std::string>& ParityRow::fields() {
  static const std::vector<std::string> f = {"label",        "conductor", "q",      "sha_an",    "lratio",
                                             "ord_q_lratio", "ord_q_sha", "D_star", "both_even", "notes"};
  return f;
}

std::vector<std::string> ParityRow::values() const {
  return {label,
          std::to_string(conductor),
          std::to_string(q),
          z2s(sha_an),
          q2s(lratio),
          std::to_string(ord_q_lratio),
          std::to_string(ord_q_sha),
          std::to_string(D_star),
          b2s(both_even),
          notes};
}

ParityRow ParityRow::from_values(const std::vector<std::string>& v) {
  check_width(v, fields().size());
  ParityRow r;
  r.label = v[0];
  r.conductor = s2l(v[1]);
  r.q = s2l(v[2]);
  r.sha_an = s2z(v[3]);
  r.lratio = s2q(v[4]);
  r.ord_q_lratio = static_cast<int>(s2l(v[5]));
  r.ord_q_sha = static_cast<int>(s2l(v[6]));
  r.D_star = s2l(v[7]);
  r.both_even = s2b(v[8]);
  r.notes = v[9];
  return r;
}

const std::vector<std::string>& SquarenessRecord::fields() {
  static const std::vector<std::string> f = {
      "N",        "D",        "dim",      "lratio",   "twisted_index", "n",     "brandt_index", "lhs",  "rhs",
      "lhs_away", "rhs_away", "lhs_zero", "rhs_zero", "equal",         "square", "verdict",     "notes"};
  return f;
}

std::vector<std::string> SquarenessRecord::values() const {
  return {std::to_string(N),
          std::to_string(D),
          std::to_string(dim),
          q2s(lratio),
          q2s(twisted_index),
          z2s(n),
          q2s(brandt_index),
          q2s(lhs),
          q2s(rhs),
          q2s(lhs_away),
          q2s(rhs_away),
          b2s(lhs_zero),
          b2s(rhs_zero),
          b2s(equal),
          b2s(square),
          b2s(verdict),
          notes};
}

SquarenessRecord SquarenessRecord::from_values(const std::vector<std::string>& v) {
  check_width(v, fields().size());
  SquarenessRecord r;
  r.N = s2l(v[0]);
  r.D = s2l(v[1]);
  r.dim = static_cast<int>(s2l(v[2]));
  r.lratio = s2q(v[3]);
  r.twisted_index = s2q(v[4]);
  r.n = s2z(v[5]);
  r.brandt_index = s2q(v[6]);
  r.lhs = s2q(v[7]);
  r.rhs = s2q(v[8]);
  r.lhs_away = s2q(v[9]);
  r.rhs_away = s2q(v[10]);
  r.lhs_zero = s2b(v[11]);
  r.rhs_zero = s2b(v[12]);
  r.equal = s2b(v[13]);
  r.square = s2b(v[14]);
  r.verdict = s2b(v[15]);
  r.notes = v[16];
  return r;
}

template <class Row>
std::string to_json(const Report<Row>& r) {
  json doc;
  doc["schema_version"] = Report<Row>::schema_version;
  json config = json::object();
  for (const auto& [k, v] : r.config) config[k] = v;
  doc["config"] = config;
  json rows = json::array();
  const char* kind = kinds(static_cast<const Row*>(nullptr));
  for (const auto& row : r.rows) {
    json o;
    const auto vals = row.values();
    for (std::size_t i = 0; i < vals.size(); ++i) o[Row::fields()[i]] = typed(kind[i], vals[i]);
    rows.push_back(o);
  }
  doc["rows"] = rows;
  json summary = json::object();
  for (const auto& [k, v] : r.summary) summary[k] = v;
  doc["summary"] = summary;
  doc["skipped"] = r.skipped;
  return doc.dump(2) + "\n";
}

template <class Row>
std::string to_csv(const Report<Row>& r) {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << csv_field(v[i]);
    out << "\n";
  };
  line(Row::fields());
  for (const auto& row : r.rows) line(row.values());
  return out.str();
}

template <class Row>
std::vector<Row> parse_csv(std::istream& in) {
  std::vector<std::string> rec;
  if (!read_record(in, rec) || rec != Row::fields()) throw Error(Errc::ParseError, "missing or unexpected CSV header");
  std::vector<Row> rows;
  while (read_record(in, rec)) {
    if (rec.size() == 1 && rec[0].empty()) continue;
    rows.push_back(Row::from_values(rec));
  }
  return rows;
}

template <class Row>
void emit(const Report<Row>& r, Format format, const std::string& path) {
  const std::string text = format == Format::Json ? to_json(r) : to_csv(r);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(Errc::IoError, "write to " + path + " failed");
}

#define BSDTWIST_INSTANTIATE(Row)                                        \
  template std::string to_json<Row>(const Report<Row>&);                 \
  template std::string to_csv<Row>(const Report<Row>&);                  \
  template std::vector<Row> parse_csv<Row>(std::istream&);               \
  template void emit<Row>(const Report<Row>&, Format, const std::string&);

BSDTWIST_INSTANTIATE(ReportRow)
BSDTWIST_INSTANTIATE(StarRow)
BSDTWIST_INSTANTIATE(ParityRow)
BSDTWIST_INSTANTIATE(SquarenessRecord)

}  // namespace bsdtwist
