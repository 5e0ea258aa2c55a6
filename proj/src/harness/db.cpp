#include <fstream>
#include <optional>
#include <sstream>

#include "bsdtwist/error.hpp"
#include "bsdtwist/harness.hpp"

namespace bsdtwist {

namespace {

bool parse_long(const std::string& s, long& out) {
  std::size_t pos = 0;
  try {
    out = std::stol(s, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == s.size();
}

bool parse_int(const std::string& s, Int& out) {
  if (s.empty()) return false;
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) return false;
  for (std::size_t i = start; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  out = Int(s[0] == '+' ? s.substr(1) : s);
  return true;
}

bool is_iso_label(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < 'a' || c > 'z') return false;
  return true;
}

}  // namespace

std::string CurveRecord::label() const { return std::to_string(conductor) + iso + std::to_string(index); }

EllipticCurve CurveRecord::curve() const { return EllipticCurve(a); }

std::vector<CurveRecord> parse_db(std::istream& in, bool validate) {
  std::vector<CurveRecord> out;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    auto fail = [&](const std::string& why) {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": " + why);
    };
    if (tok.size() != 10) fail("expected 10 fields, found " + std::to_string(tok.size()));
    CurveRecord r;
    long index = 0, rank = 0, torsion = 0;
    if (!parse_long(tok[0], r.conductor) || r.conductor < 1) fail("bad conductor '" + tok[0] + "'");
    if (!is_iso_label(tok[1])) fail("bad isogeny class label '" + tok[1] + "'");
    r.iso = tok[1];
    if (!parse_long(tok[2], index) || index < 1) fail("bad curve index '" + tok[2] + "'");
    for (int i = 0; i < 5; ++i)
      if (!parse_int(tok[3 + i], r.a[i])) fail("bad a-invariant '" + tok[3 + i] + "'");
    if (!parse_long(tok[8], rank) || rank < 0) fail("bad rank '" + tok[8] + "'");
    if (!parse_long(tok[9], torsion) || torsion < 1) fail("bad torsion '" + tok[9] + "'");
    r.index = static_cast<int>(index);
    r.rank = static_cast<int>(rank);
    r.torsion = static_cast<int>(torsion);
    std::optional<EllipticCurve> curve;
    try {
      curve.emplace(r.a);
    } catch (const Error&) {
      fail("a-invariants do not define an elliptic curve");
    }
    const EllipticCurve& E = *curve;
    if (validate) {
      Int N = conductor(E);
      if (N != r.conductor)
        throw Error(Errc::ValidationError, r.label() + ": conductor is " + N.get_str());
      long t = torsion_order(E);
      if (t != r.torsion)
        throw Error(Errc::ValidationError, r.label() + ": torsion order is " + std::to_string(t));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CurveRecord> parse_db(const std::string& path, bool validate) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  return parse_db(in, validate);
}

const CurveRecord& find_curve(const std::vector<CurveRecord>& db, const std::string& label) {
  for (const auto& r : db)
    if (r.label() == label) return r;
  throw Error(Errc::NoMatch, "no curve labelled " + label);
}

}  // namespace bsdtwist
