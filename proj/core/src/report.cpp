#include "sdseg/report.hpp"

#include <cstdio>
#include <sstream>

namespace sdseg {
namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

void write_csv(std::ostream& out, const EvalReport& report) {
  out << "id,tp,fp,fn,precision,recall,f1\n";
  for (const auto& row : report.per_image) {
    out << csv_field(row.id) << ',' << row.counts.tp << ',' << row.counts.fp
        << ',' << row.counts.fn << ',' << fixed(row.rates.precision) << ','
        << fixed(row.rates.recall) << ',' << fixed(row.rates.f1) << '\n';
  }
  out << "macro,,,," << fixed(report.macro.precision) << ','
      << fixed(report.macro.recall) << ',' << fixed(report.macro.f1) << '\n';
  out << "micro," << report.pooled.tp << ',' << report.pooled.fp << ','
      << report.pooled.fn << ',' << fixed(report.micro.precision) << ','
      << fixed(report.micro.recall) << ',' << fixed(report.micro.f1) << '\n';
}

std::string to_csv(const EvalReport& report) {
  std::ostringstream os;
  write_csv(os, report);
  return os.str();
}

const std::vector<PublishedScore>& published_scores() {
  static const std::vector<PublishedScore> kScores{
      {"SPEC (published)", 50.0, 64.0, 56.1},
      {"Hierarchical clustering (published)", 64.0, 69.0, 66.4},
      {"Least absolute deviation (published)", 91.4, 87.0, 89.1},
      {"Sparse + TV decomposition (published)", 94.3, 88.0, 90.9},
  };
  return kScores;
}

void write_summary_table(std::ostream& out,
                         const std::vector<MethodSummary>& methods) {
  constexpr std::size_t kName = 40;
  auto pct = [](double v) { return fixed(100.0 * v, 1) + "%"; };
  out << pad("Method", kName) << pad("Precision", 11) << pad("Recall", 11)
      << "F1\n";
  out << std::string(kName + 11 + 11 + 6, '-') << '\n';
  for (const auto& m : methods) {
    const EvalReport& r = *m.report;
    out << pad(m.name + " (macro)", kName) << pad(pct(r.macro.precision), 11)
        << pad(pct(r.macro.recall), 11) << pct(r.macro.f1) << '\n';
    out << pad(m.name + " (micro)", kName) << pad(pct(r.micro.precision), 11)
        << pad(pct(r.micro.recall), 11) << pct(r.micro.f1) << '\n';
  }
  for (const auto& p : published_scores()) {
    out << pad(std::string(p.method), kName)
        << pad(fixed(p.precision, 1) + "%", 11) << pad(fixed(p.recall, 1) + "%", 11)
        << fixed(p.f1, 1) << "%\n";
  }
}

}  // namespace sdseg
