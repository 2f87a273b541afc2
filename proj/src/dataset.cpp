#include "rtc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_set>

namespace rtc {

std::string to_string(GroupLabel label) {
  switch (label) {
    case GroupLabel::HC: return "HC";
    case GroupLabel::EMci: return "E-MCI";
    case GroupLabel::AMci: return "A-MCI";
    case GroupLabel::MdMci: return "MD-MCI";
    case GroupLabel::EsAd: return "ES-AD";
  }
  throw std::logic_error("invalid GroupLabel");
}

GroupLabel label_from_string(const std::string& text) {
  for (GroupLabel l : kAllLabels) {
    if (text == to_string(l)) return l;
  }
  throw UnknownLabel("unknown group label: '" + text + "'");
}

std::size_t DurationDataset::count_label(GroupLabel l) const {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(),
                    [l](const DurationSample& s) { return s.label == l; }));
}

IndicatorVector::IndicatorVector(const std::array<bool, kTaskCount>& bits) : bits_(bits) {
  if (std::none_of(bits.begin(), bits.end(), [](bool b) { return b; })) {
    throw std::invalid_argument("indicator vector must select at least one task");
  }
}

IndicatorVector IndicatorVector::from_mask(unsigned mask) {
  if (mask == 0 || mask >= (1u << kTaskCount)) {
    throw std::invalid_argument("indicator mask out of range");
  }
  std::array<bool, kTaskCount> bits{};
  for (int j = 0; j < kTaskCount; ++j) bits[j] = (mask >> j) & 1u;
  return IndicatorVector(bits);
}

IndicatorVector IndicatorVector::from_tasks(const std::vector<int>& tasks) {
  std::array<bool, kTaskCount> bits{};
  for (int t : tasks) {
    if (t < 1 || t > kTaskCount) throw std::invalid_argument("task id out of range");
    bits[t - 1] = true;
  }
  return IndicatorVector(bits);
}

int IndicatorVector::count() const {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), true));
}

unsigned IndicatorVector::mask() const {
  unsigned m = 0;
  for (int j = 0; j < kTaskCount; ++j) {
    if (bits_[j]) m |= 1u << j;
  }
  return m;
}

std::vector<int> IndicatorVector::tasks() const {
  std::vector<int> out;
  for (int j = 1; j <= kTaskCount; ++j) {
    if (bits_[j - 1]) out.push_back(j);
  }
  return out;
}

std::string IndicatorVector::to_string() const {
  std::string out;
  for (int t : tasks()) {
    if (!out.empty()) out += ',';
    out += std::to_string(t);
  }
  return out;
}

std::vector<IndicatorVector> all_indicator_vectors() {
  std::vector<IndicatorVector> out;
  out.reserve((1u << kTaskCount) - 1);
  for (unsigned mask = 1; mask < (1u << kTaskCount); ++mask) {
    out.push_back(IndicatorVector::from_mask(mask));
  }
  return out;
}

SelectionResult select_features(const DurationDataset& ds, const IndicatorVector& indicator) {
  SelectionResult res;
  res.dataset.polarity = ds.polarity;
  for (const DurationSample& s : ds.samples) {
    bool complete = true;
    for (int t : indicator.tasks()) {
      if (!s.has_task(t)) {
        complete = false;
        break;
      }
    }
    if (!complete) {
      ++res.dropped;
      continue;
    }
    DurationSample kept;
    kept.subject_id = s.subject_id;
    kept.label = s.label;
    for (int t : indicator.tasks()) kept.set_task(t, s.task(t));
    res.dataset.samples.push_back(std::move(kept));
  }
  if (res.dataset.samples.empty()) {
    throw EmptyResult("no samples have all selected tasks (" + indicator.to_string() + ")");
  }
  return res;
}

DurationDataset pair_subset(const DurationDataset& ds, GroupLabel negative, GroupLabel positive) {
  if (negative == positive) {
    throw std::invalid_argument("pair_subset: classes must differ");
  }
  DurationDataset out;
  out.polarity = BinaryPolarity{negative, positive};
  for (const DurationSample& s : ds.samples) {
    if (s.label == negative || s.label == positive) out.samples.push_back(s);
  }
  for (GroupLabel l : {negative, positive}) {
    if (out.count_label(l) == 0) {
      throw ClassAbsent("class " + to_string(l) + " has no samples");
    }
  }
  return out;
}

ScalerParams fit_scaler(const DurationDataset& ds) {
  ScalerParams params;
  for (int j = 0; j < kTaskCount; ++j) {
    bool any = false;
    double lo = 0.0, hi = 0.0;
    for (const DurationSample& s : ds.samples) {
      if (!s.tasks[j]) continue;
      const double v = *s.tasks[j];
      if (!any) {
        lo = hi = v;
        any = true;
      } else {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    if (!any) continue;
    if (lo == hi) {
      throw DegenerateFeature("task " + std::to_string(j + 1) +
                              " is constant (" + format_double(lo) + ") in the fit data");
    }
    params.per_task[j] = FeatureScale{lo, hi};
  }
  return params;
}

DurationDataset apply_scaler(const DurationDataset& ds, const ScalerParams& params) {
  DurationDataset out;
  out.polarity = ds.polarity;
  out.samples.reserve(ds.samples.size());
  for (const DurationSample& s : ds.samples) {
    DurationSample scaled = s;
    for (int j = 0; j < kTaskCount; ++j) {
      if (!s.tasks[j]) continue;
      if (!params.per_task[j]) {
        throw std::invalid_argument("no scale fitted for task " + std::to_string(j + 1));
      }
      const FeatureScale& fs = *params.per_task[j];
      scaled.tasks[j] = 2.0 * (*s.tasks[j] - fs.min) / (fs.max - fs.min) - 1.0;
    }
    out.samples.push_back(std::move(scaled));
  }
  return out;
}

std::vector<std::vector<double>> dense_features(const DurationDataset& ds,
                                                const IndicatorVector& indicator) {
  const std::vector<int> tasks = indicator.tasks();
  std::vector<std::vector<double>> rows;
  rows.reserve(ds.samples.size());
  for (const DurationSample& s : ds.samples) {
    std::vector<double> row;
    row.reserve(tasks.size());
    for (int t : tasks) {
      if (!s.has_task(t)) {
        throw std::invalid_argument("sample " + s.subject_id + " is missing task " +
                                    std::to_string(t));
      }
      row.push_back(s.task(t));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<int> binary_labels(const DurationDataset& ds) {
  if (!ds.polarity) {
    throw std::invalid_argument("dataset has no binary polarity; call pair_subset first");
  }
  std::vector<int> y;
  y.reserve(ds.samples.size());
  for (const DurationSample& s : ds.samples) {
    if (s.label == ds.polarity->negative) {
      y.push_back(-1);
    } else if (s.label == ds.polarity->positive) {
      y.push_back(+1);
    } else {
      throw std::invalid_argument("sample " + s.subject_id + " is outside the binary pair");
    }
  }
  return y;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw MalformedRow("bad numeric field: '" + s + "'");
  }
  return v;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

constexpr const char* kDurationHeader = "subject,label,t1,t2,t3,t4,t5,t6,t7";

}  // namespace

DurationDataset parse_duration_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool saw_header = false;
  DurationDataset ds;
  std::unordered_set<std::string> seen;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != kDurationHeader) {
        throw MalformedRow("expected header '" + std::string(kDurationHeader) + "', got '" +
                           line + "'");
      }
      saw_header = true;
      continue;
    }
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 2 + kTaskCount) {
      throw MalformedRow("expected " + std::to_string(2 + kTaskCount) + " fields, got " +
                         std::to_string(f.size()) + ": '" + line + "'");
    }
    DurationSample s;
    s.subject_id = f[0];
    if (s.subject_id.empty()) throw MalformedRow("empty subject id: '" + line + "'");
    s.label = label_from_string(f[1]);
    for (int j = 0; j < kTaskCount; ++j) {
      const std::string& field = f[2 + j];
      if (field.empty()) continue;
      const double v = parse_double(field);
      if (v < 0.0) {
        throw MalformedRow("negative duration for " + s.subject_id + " task " +
                           std::to_string(j + 1));
      }
      s.tasks[j] = v;
    }
    if (!seen.insert(s.subject_id).second) {
      throw DuplicateSubject("subject '" + s.subject_id + "' appears more than once");
    }
    ds.samples.push_back(std::move(s));
  }
  if (!saw_header) throw MalformedRow("empty duration CSV");
  return ds;
}

std::string duration_csv(const DurationDataset& ds) {
  std::string out = kDurationHeader;
  out += '\n';
  for (const DurationSample& s : ds.samples) {
    out += s.subject_id;
    out += ',';
    out += to_string(s.label);
    for (int j = 0; j < kTaskCount; ++j) {
      out += ',';
      if (s.tasks[j]) out += format_double(*s.tasks[j]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace rtc
