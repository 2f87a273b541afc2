#include "rtc/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace rtc {

namespace {

constexpr const char* kColumnHeader = "task,t_ms,x,y,pressure,azimuth,altitude";

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::int64_t parse_i64(const std::string& s, const std::string& line) {
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw MalformedRow("bad integer field '" + s + "' in row '" + line + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line) {
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

}  // namespace

MeasurementMode::MeasurementMode(int mode) : mode_(mode) {
  if (mode < 1 || mode > 5) {
    throw std::invalid_argument("measurement mode must be 1..5, got " + std::to_string(mode));
  }
}

SubjectRecording parse_recording(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  SubjectRecording rec;
  bool have_subject = false, have_label = false;
  int current_task = 0;
  std::int64_t last_t = 0;

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = strip(line.substr(1));
      if (body.rfind("subject:", 0) == 0) {
        rec.subject_id = strip(body.substr(8));
        if (rec.subject_id.empty()) throw MalformedRow("empty subject id");
        have_subject = true;
      } else if (body.rfind("label:", 0) == 0) {
        rec.label = label_from_string(strip(body.substr(6)));
        have_label = true;
      } else {
        throw MalformedRow("unrecognized comment line: '" + line + "'");
      }
      continue;
    }
    if (!have_subject || !have_label) {
      throw MalformedRow("data before '# subject:' / '# label:' headers: '" + line + "'");
    }
    if (line == kColumnHeader) continue;
    const std::vector<std::string> f = split(line);
    if (f.size() != 7) {
      throw MalformedRow("expected 7 fields, got " + std::to_string(f.size()) + ": '" + line +
                         "'");
    }
    const std::int64_t task64 = parse_i64(f[0], line);
    if (task64 < 1 || task64 > kTaskCount) {
      throw MalformedRow("task id out of range in row '" + line + "'");
    }
    const int task = static_cast<int>(task64);
    PenSample s;
    s.t_ms = parse_i64(f[1], line);
    s.x = parse_double(f[2]);
    s.y = parse_double(f[3]);
    s.pressure = parse_double(f[4]);
    s.azimuth = parse_double(f[5]);
    s.altitude = parse_double(f[6]);
    if (s.pressure < 0.0) throw MalformedRow("negative pressure in row '" + line + "'");

    if (task != current_task) {
      if (rec.tasks.count(task)) {
        throw MalformedRow("task " + std::to_string(task) + " rows are not contiguous");
      }
      current_task = task;
      rec.tasks[task].task_id = task;
    } else if (s.t_ms <= last_t) {
      throw NonMonotonicTime("subject " + rec.subject_id + " task " + std::to_string(task) +
                             ": t_ms " + std::to_string(s.t_ms) + " after " +
                             std::to_string(last_t));
    }
    last_t = s.t_ms;
    rec.tasks[task].samples.push_back(s);
  }

  if (!have_subject || !have_label) throw MalformedRow("missing recording headers");
  for (const auto& [task, tr] : rec.tasks) {
    const bool any_down = std::any_of(tr.samples.begin(), tr.samples.end(),
                                      [](const PenSample& p) { return p.pressure > 0.0; });
    if (!any_down) {
      throw EmptyTask("subject " + rec.subject_id + " task " + std::to_string(task) +
                      " has no pen-down sample");
    }
  }
  return rec;
}

std::string recording_csv(const SubjectRecording& rec) {
  std::string out = "# subject: " + rec.subject_id + "\n# label: " + to_string(rec.label) + "\n";
  out += kColumnHeader;
  out += '\n';
  for (const auto& [task, tr] : rec.tasks) {
    for (const PenSample& s : tr.samples) {
      out += std::to_string(task);
      out += ',';
      out += std::to_string(s.t_ms);
      out += ',';
      out += format_double(s.x);
      out += ',';
      out += format_double(s.y);
      out += ',';
      out += format_double(s.pressure);
      out += ',';
      out += format_double(s.azimuth);
      out += ',';
      out += format_double(s.altitude);
      out += '\n';
    }
  }
  return out;
}

namespace {

struct RunDecomposition {
  std::int64_t span_ms = 0;     // first to last pen-down sample
  std::int64_t on_paper_ms = 0; // sum of per-run spans
};

RunDecomposition decompose(const TaskRecording& rec, double threshold) {
  RunDecomposition d;
  bool any = false;
  std::int64_t first_down = 0, last_down = 0;
  std::int64_t run_start = 0, run_end = 0;
  bool in_run = false;
  for (const PenSample& s : rec.samples) {
    const bool down = s.pressure > threshold;
    if (down) {
      if (!any) {
        any = true;
        first_down = s.t_ms;
      }
      last_down = s.t_ms;
      if (!in_run) {
        in_run = true;
        run_start = s.t_ms;
      }
      run_end = s.t_ms;
    } else if (in_run) {
      d.on_paper_ms += run_end - run_start;
      in_run = false;
    }
  }
  if (in_run) d.on_paper_ms += run_end - run_start;
  if (!any) {
    throw EmptyTask("task " + std::to_string(rec.task_id) +
                    " has no sample above the pressure threshold");
  }
  d.span_ms = last_down - first_down;
  return d;
}

}  // namespace

double extract_duration(const TaskRecording& rec, MeasurementMode mode,
                        double pressure_threshold) {
  const RunDecomposition d = decompose(rec, pressure_threshold);
  const double total = static_cast<double>(d.span_ms) / 1000.0;
  const double on_paper = static_cast<double>(d.on_paper_ms) / 1000.0;
  switch (mode.value()) {
    case 1:
      return total;
    case 2:
      return on_paper;
    case 3:
      return rec.task_id == 3 ? on_paper : total;
    case 4: {
      const double base = rec.task_id == 3 ? on_paper : total;
      return kClampedTask[rec.task_id - 1] ? std::min(base, kPrescribedLimitSeconds) : base;
    }
    case 5:
      // Defined as the difference of the two reported values so that
      // mode5 == mode1 - mode2 holds bit-exactly.
      return total - on_paper;
  }
  throw std::logic_error("unreachable mode");
}

DurationDataset build_duration_dataset(const std::vector<SubjectRecording>& recordings,
                                       MeasurementMode mode, double pressure_threshold) {
  DurationDataset ds;
  std::vector<std::string> seen;
  for (const SubjectRecording& rec : recordings) {
    if (std::find(seen.begin(), seen.end(), rec.subject_id) != seen.end()) {
      throw DuplicateSubject("subject '" + rec.subject_id + "' recorded more than once");
    }
    seen.push_back(rec.subject_id);
    DurationSample s;
    s.subject_id = rec.subject_id;
    s.label = rec.label;
    for (const auto& [task, tr] : rec.tasks) {
      s.set_task(task, extract_duration(tr, mode, pressure_threshold));
    }
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

}  // namespace rtc
