#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "sdseg/metrics.hpp"

namespace sdseg {

/// CSV layout:
///
///   id,tp,fp,fn,precision,recall,f1
///   <one row per image, rates with 6 decimals>
///   macro,,,,<mean precision>,<mean recall>,<mean f1>
///   micro,<pooled tp>,<pooled fp>,<pooled fn>,<precision>,<recall>,<f1>
///
/// Ids containing commas, quotes or newlines are double-quoted.
void write_csv(std::ostream& out, const EvalReport& report);
std::string to_csv(const EvalReport& report);

/// A row of the accuracy comparison table, in percent.
struct PublishedScore {
  std::string_view method;
  double precision;
  double recall;
  double f1;
};

/// Published reference accuracies on the 332-block screen-content set.
const std::vector<PublishedScore>& published_scores();

struct MethodSummary {
  std::string name;
  const EvalReport* report;
};

/// Human-readable table: macro and micro rates for each evaluated method,
/// followed by the published reference rows.
void write_summary_table(std::ostream& out,
                         const std::vector<MethodSummary>& methods);

}  // namespace sdseg
