#pragma once

// Hand-checked pen streams with expected durations under every measurement
// mode. Shared between the ingest unit tests and the acceptance suite; the
// expectations were worked out on paper from the run decomposition and must
// not be regenerated from the code under test.

#include <cstdint>
#include <vector>

#include "rtc/ingest.hpp"

namespace golden {

struct Stream {
  const char* name;
  int task;
  std::vector<std::pair<std::int64_t, double>> samples;  // (t_ms, pressure)
  double m1, m2, m3, m4, m5;
};

inline rtc::TaskRecording to_recording(const Stream& g) {
  rtc::TaskRecording rec;
  rec.task_id = g.task;
  for (const auto& [t, p] : g.samples) {
    rtc::PenSample s;
    s.t_ms = t;
    s.pressure = p;
    s.x = static_cast<double>(t) * 0.01;
    s.y = 5.0;
    rec.samples.push_back(s);
  }
  return rec;
}

inline const std::vector<Stream>& streams() {
  static const std::vector<Stream> all = {
      {"single_run", 1, {{1000, 0.5}, {3000, 0.6}, {5000, 0.4}}, 4, 4, 4, 4, 0},
      {"two_runs_air_padded",
       1,
       {{0, 0}, {500, 0.3}, {1500, 0.4}, {2000, 0}, {2500, 0.2}, {4500, 0.5}, {5000, 0}},
       4, 3, 4, 4, 1},
      {"task3_two_runs",
       3,
       {{1000, 0.1}, {2000, 0.2}, {3000, 0}, {4000, 0.3}, {6000, 0.8}},
       5, 3, 3, 3, 2},
      {"task3_single_run", 3, {{0, 0.5}, {2500, 0.5}}, 2.5, 2.5, 2.5, 2.5, 0},
      {"task4_over_limit", 4, {{0, 0.4}, {17200, 0.4}}, 17.2, 17.2, 17.2, 15.0, 0},
      {"task6_over_limit_two_runs",
       6,
       {{0, 0.5}, {9000, 0.5}, {10000, 0}, {11000, 0.5}, {16000, 0.5}},
       16, 14, 16, 15, 2},
      {"task7_exactly_limit", 7, {{500, 0.2}, {15500, 0.9}}, 15, 15, 15, 15, 0},
      {"task7_under_limit_two_runs",
       7,
       {{0, 0.3}, {5000, 0.3}, {6000, 0}, {7000, 0.3}, {14000, 0.3}},
       14, 12, 14, 14, 2},
      {"task2_long",
       2,
       {{0, 0.5}, {60000, 0.5}, {61000, 0}, {62000, 0.4}, {103000, 0.6}},
       103, 101, 103, 103, 2},
      {"singleton_pen_down", 5, {{1000, 0}, {2000, 0.7}, {3000, 0}}, 0, 0, 0, 0, 0},
      {"three_runs",
       1,
       {{0, 0.2}, {1000, 0.2}, {2000, 0}, {3000, 0.3}, {4000, 0.3}, {5000, 0}, {6000, 0.1},
        {9000, 0.1}},
       9, 5, 9, 9, 4},
      {"task4_under_limit_two_runs",
       4,
       {{0, 0.6}, {8000, 0.6}, {9000, 0}, {10000, 0.5}, {12000, 0.5}},
       12, 10, 12, 12, 2},
  };
  return all;
}

inline double expected(const Stream& g, int mode) {
  switch (mode) {
    case 1: return g.m1;
    case 2: return g.m2;
    case 3: return g.m3;
    case 4: return g.m4;
    case 5: return g.m5;
  }
  return -1;
}

}  // namespace golden
