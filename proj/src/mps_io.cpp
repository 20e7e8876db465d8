#include <cstdio>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "tep/mip.hpp"
#include "tep/network.hpp"

namespace tep {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  std::string out = s;
  if (out.size() < width) out.append(width - out.size(), ' ');
  return out;
}

}  // namespace

std::string write_mps(const MipModel& model) {
  const LinearProgram& lp = model.lp;
  lp.check();
  auto vname = [&](int j) {
    if (j < static_cast<int>(model.var_names.size()) && !model.var_names[j].empty())
      return model.var_names[j];
    char buf[16];
    std::snprintf(buf, sizeof buf, "C%06d", j);
    return std::string(buf);
  };
  auto rname = [&](int i) {
    if (i < static_cast<int>(model.row_names.size()) && !model.row_names[i].empty())
      return model.row_names[i];
    char buf[16];
    std::snprintf(buf, sizeof buf, "R%06d", i);
    return std::string(buf);
  };

  std::ostringstream out;
  out << "NAME          " << model.name << "\n";
  out << "ROWS\n N  COST\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    const char s = lp.senses[i] == RowSense::le ? 'L' : (lp.senses[i] == RowSense::ge ? 'G' : 'E');
    out << " " << s << "  " << rname(i) << "\n";
  }
  // column-major entries
  std::vector<std::vector<std::pair<std::string, double>>> col_entries(lp.num_vars);
  for (int j = 0; j < lp.num_vars; ++j)
    if (lp.objective[j] != 0.0) col_entries[j].push_back({"COST", lp.objective[j]});
  {
    std::map<std::pair<int, int>, double> merged;
    for (const auto& t : lp.entries) merged[{t.col, t.row}] += t.value;
    for (const auto& [key, v] : merged)
      if (v != 0.0) col_entries[key.first].push_back({rname(key.second), v});
  }
  std::set<int> binset(model.binaries.begin(), model.binaries.end());
  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (int j = 0; j < lp.num_vars; ++j) {
    const bool is_bin = binset.count(j) > 0;
    if (is_bin != in_int) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "M%06d", marker++);
      out << "    " << pad(buf, 10) << pad("'MARKER'", 25 - 14) << " "
          << (is_bin ? "'INTORG'" : "'INTEND'") << "\n";
      in_int = is_bin;
    }
    for (std::size_t e = 0; e < col_entries[j].size(); e += 2) {
      out << "    " << pad(vname(j), 10) << pad(col_entries[j][e].first, 10)
          << pad(fmt(col_entries[j][e].second), 15);
      if (e + 1 < col_entries[j].size())
        out << pad(col_entries[j][e + 1].first, 10) << fmt(col_entries[j][e + 1].second);
      out << "\n";
    }
    if (col_entries[j].empty()) {
      out << "    " << pad(vname(j), 10) << pad("COST", 10) << fmt(0.0) << "\n";
    }
  }
  if (in_int) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "M%06d", marker++);
    out << "    " << pad(buf, 10) << pad("'MARKER'", 25 - 14) << " 'INTEND'\n";
  }
  out << "RHS\n";
  for (int i = 0; i < lp.num_rows(); ++i)
    if (lp.rhs[i] != 0.0)
      out << "    " << pad("RHS", 10) << pad(rname(i), 10) << fmt(lp.rhs[i]) << "\n";
  if (lp.objective_offset != 0.0)
    out << "    " << pad("RHS", 10) << pad("COST", 10) << fmt(-lp.objective_offset) << "\n";
  out << "BOUNDS\n";
  for (int j = 0; j < lp.num_vars; ++j) {
    const double lo = lp.lower[j], hi = lp.upper[j];
    if (binset.count(j) && lo == 0.0 && hi == 1.0) {
      out << " BV " << pad("BND", 10) << vname(j) << "\n";
      continue;
    }
    if (lo == 0.0 && !std::isfinite(hi)) continue;  // MPS default
    if (lo == hi) {
      out << " FX " << pad("BND", 10) << pad(vname(j), 10) << fmt(lo) << "\n";
      continue;
    }
    if (!std::isfinite(lo) && !std::isfinite(hi)) {
      out << " FR " << pad("BND", 10) << vname(j) << "\n";
      continue;
    }
    if (std::isfinite(lo) && lo != 0.0)
      out << " LO " << pad("BND", 10) << pad(vname(j), 10) << fmt(lo) << "\n";
    if (!std::isfinite(lo))
      out << " MI " << pad("BND", 10) << vname(j) << "\n";
    if (std::isfinite(hi))
      out << " UP " << pad("BND", 10) << pad(vname(j), 10) << fmt(hi) << "\n";
  }
  if (!model.sos2.empty()) {
    out << "SOS\n";
    for (std::size_t g = 0; g < model.sos2.size(); ++g) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "S%06zu", g);
      out << " S2 " << pad("SOS", 10) << buf << "\n";
      int w = 1;
      for (int v : model.sos2[g])
        out << "    " << pad(vname(v), 10) << fmt(w++) << "\n";
    }
  }
  out << "ENDATA\n";
  return out.str();
}

MipModel read_mps(const std::string& text) {
  MipModel model;
  LinearProgram& lp = model.lp;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::map<std::string, int> rows;   // name -> row index (objective = -1)
  std::map<std::string, int> cols;
  bool in_int = false;
  int lineno = 0;

  auto col_of = [&](const std::string& name) {
    auto it = cols.find(name);
    if (it != cols.end()) return it->second;
    const int j = lp.add_var(0.0, kInf, 0.0);
    cols[name] = j;
    model.var_names.push_back(name);
    if (in_int) {
      model.binaries.push_back(j);
      lp.upper[j] = 1.0;
    }
    return j;
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '*') continue;
    std::istringstream ls(line);
    std::vector<std::string> f;
    std::string tok;
    while (ls >> tok) f.push_back(tok);
    if (f.empty()) continue;
    if (line[0] != ' ') {  // section header
      section = f[0];
      if (section == "NAME" && f.size() > 1) model.name = f[1];
      if (section == "ENDATA") break;
      continue;
    }
    if (section == "ROWS") {
      if (f.size() < 2) throw TepError("mps: bad ROWS line " + std::to_string(lineno));
      if (f[0] == "N") {
        rows[f[1]] = -1;
      } else {
        RowSense s = f[0] == "L" ? RowSense::le : (f[0] == "G" ? RowSense::ge : RowSense::eq);
        rows[f[1]] = lp.add_row(s, 0.0);
        model.row_names.push_back(f[1]);
      }
    } else if (section == "COLUMNS") {
      if (f.size() >= 3 && f[1] == "'MARKER'") {
        in_int = f[2] == "'INTORG'";
        continue;
      }
      if (f.size() < 3) throw TepError("mps: bad COLUMNS line " + std::to_string(lineno));
      const int j = col_of(f[0]);
      for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
        const double v = std::stod(f[k + 1]);
        auto it = rows.find(f[k]);
        if (it == rows.end()) throw TepError("mps: unknown row " + f[k]);
        if (it->second < 0)
          lp.objective[j] = v;
        else
          lp.set_entry(it->second, j, v);
      }
    } else if (section == "RHS") {
      for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
        auto it = rows.find(f[k]);
        if (it == rows.end()) throw TepError("mps: unknown rhs row " + f[k]);
        if (it->second < 0)
          lp.objective_offset = -std::stod(f[k + 1]);
        else
          lp.rhs[it->second] = std::stod(f[k + 1]);
      }
    } else if (section == "BOUNDS") {
      if (f.size() < 3) throw TepError("mps: bad BOUNDS line " + std::to_string(lineno));
      const std::string& type = f[0];
      const int j = col_of(f[2]);
      const double v = f.size() > 3 ? std::stod(f[3]) : 0.0;
      if (type == "UP")
        lp.upper[j] = v;
      else if (type == "LO")
        lp.lower[j] = v;
      else if (type == "FX")
        lp.lower[j] = lp.upper[j] = v;
      else if (type == "FR") {
        lp.lower[j] = -kInf;
        lp.upper[j] = kInf;
      } else if (type == "MI")
        lp.lower[j] = -kInf;
      else if (type == "PL")
        lp.upper[j] = kInf;
      else if (type == "BV") {
        lp.lower[j] = 0.0;
        lp.upper[j] = 1.0;
        if (std::find(model.binaries.begin(), model.binaries.end(), j) == model.binaries.end())
          model.binaries.push_back(j);
      } else
        throw TepError("mps: unsupported bound type " + type);
    } else if (section == "SOS") {
      if (f[0] == "S2") {
        model.sos2.emplace_back();
      } else {
        if (model.sos2.empty()) throw TepError("mps: SOS entry before set header");
        model.sos2.back().push_back(col_of(f[0]));
      }
    }
  }
  lp.check();
  return model;
}

}  // namespace tep
