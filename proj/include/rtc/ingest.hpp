#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rtc/dataset.hpp"

namespace rtc {

struct PenSample {
  std::int64_t t_ms = 0;
  double x = 0.0;
  double y = 0.0;
  double pressure = 0.0;  // 0 = in the air
  double azimuth = 0.0;
  double altitude = 0.0;
};

// Samples of one task, strictly increasing in t_ms, at least one pen-down.
struct TaskRecording {
  int task_id = 0;  // 1..kTaskCount
  std::vector<PenSample> samples;
};

struct SubjectRecording {
  std::string subject_id;
  GroupLabel label = GroupLabel::HC;
  std::map<int, TaskRecording> tasks;  // a subject may have skipped tasks
};

// How a task duration is read off the pen stream:
//   1  span between first and last pen-down sample ("total" time)
//   2  sum of per-run spans, i.e. span minus in-air gaps ("on-paper" time)
//   3  mode 1, except task 3 uses mode 2
//   4  mode 3 with tasks 4, 6, 7 clamped at the 15 s prescribed limit
//   5  mode 1 minus mode 2 (the in-air time)
class MeasurementMode {
 public:
  explicit MeasurementMode(int mode);
  int value() const { return mode_; }

 private:
  int mode_;
};

// Tasks 4, 6 and 7 are stopped by the operator at a prescribed 15 s.
inline constexpr double kPrescribedLimitSeconds = 15.0;
inline constexpr std::array<bool, kTaskCount> kClampedTask = {false, false, false, true,
                                                              false, true,  true};

// Recording file: "# subject: <id>" and "# label: <group>" comment lines,
// an optional column-header line, then "task,t_ms,x,y,pressure,azimuth,altitude"
// rows grouped by task.
SubjectRecording parse_recording(std::string_view text);
std::string recording_csv(const SubjectRecording& rec);

// A sample is pen-down when pressure > threshold. Throws EmptyTask if the
// threshold leaves no pen-down sample. Result is in seconds, >= 0.
double extract_duration(const TaskRecording& rec, MeasurementMode mode,
                        double pressure_threshold = 0.0);

// One DurationSample per recording; tasks absent from a recording stay
// missing. Throws DuplicateSubject on repeated subject ids.
DurationDataset build_duration_dataset(const std::vector<SubjectRecording>& recordings,
                                       MeasurementMode mode, double pressure_threshold = 0.0);

}  // namespace rtc
