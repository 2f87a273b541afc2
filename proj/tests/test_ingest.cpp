#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "golden_streams.hpp"
#include "rtc/ingest.hpp"

using namespace rtc;

TEST_CASE("golden streams produce the expected duration under every mode") {
  for (const auto& g : golden::streams()) {
    const TaskRecording rec = golden::to_recording(g);
    for (int mode = 1; mode <= 5; ++mode) {
      CAPTURE(g.name);
      CAPTURE(mode);
      CHECK(extract_duration(rec, MeasurementMode(mode)) == golden::expected(g, mode));
    }
  }
}

TEST_CASE("mode 5 equals mode 1 minus mode 2 bit-exactly") {
  for (const auto& g : golden::streams()) {
    const TaskRecording rec = golden::to_recording(g);
    const double m1 = extract_duration(rec, MeasurementMode(1));
    const double m2 = extract_duration(rec, MeasurementMode(2));
    const double m5 = extract_duration(rec, MeasurementMode(5));
    CHECK(m5 == m1 - m2);
  }
}

TEST_CASE("mode validation") {
  CHECK_THROWS_AS(MeasurementMode(0), std::invalid_argument);
  CHECK_THROWS_AS(MeasurementMode(6), std::invalid_argument);
}

TEST_CASE("pressure threshold reclassifies light touches as air") {
  TaskRecording rec;
  rec.task_id = 1;
  for (auto [t, p] : std::vector<std::pair<std::int64_t, double>>{
           {0, 0.5}, {1000, 0.5}, {2000, 0.05}, {3000, 0.5}, {4000, 0.5}}) {
    PenSample s;
    s.t_ms = t;
    s.pressure = p;
    rec.samples.push_back(s);
  }
  // threshold 0: one unbroken run
  CHECK(extract_duration(rec, MeasurementMode(2)) == 4.0);
  // threshold 0.1: the light touch splits the run
  CHECK(extract_duration(rec, MeasurementMode(2), 0.1) == 2.0);
  CHECK(extract_duration(rec, MeasurementMode(1), 0.1) == 4.0);
  // threshold above every sample: nothing is pen-down
  CHECK_THROWS_AS(extract_duration(rec, MeasurementMode(1), 0.6), EmptyTask);
}

namespace {

const char* kRecording =
    "# subject: s007\n"
    "# label: ES-AD\n"
    "task,t_ms,x,y,pressure,azimuth,altitude\n"
    "1,0,1.5,2.5,0,10,20\n"
    "1,100,1.5,2.5,0.4,10,20\n"
    "1,4100,2,3,0.4,10,20\n"
    "3,0,0,0,0.5,0,0\n"
    "3,1000,0,0,0.5,0,0\n"
    "3,2000,0,0,0,0,0\n"
    "3,3000,0,0,0.5,0,0\n"
    "3,3500,0,0,0.5,0,0\n"
    "7,0,0,0,0.9,0,0\n"
    "7,16000,0,0,0.9,0,0\n";

}  // namespace

TEST_CASE("recording parser reads headers, tasks and samples") {
  const SubjectRecording rec = parse_recording(kRecording);
  CHECK(rec.subject_id == "s007");
  CHECK(rec.label == GroupLabel::EsAd);
  REQUIRE(rec.tasks.size() == 3);
  CHECK(rec.tasks.at(1).samples.size() == 3);
  CHECK(rec.tasks.at(3).samples.size() == 5);
  CHECK(rec.tasks.at(7).samples[1].t_ms == 16000);

  const auto ds = build_duration_dataset({rec}, MeasurementMode(4));
  REQUIRE(ds.size() == 1);
  CHECK(ds.samples[0].task(1) == 4.0);
  CHECK(ds.samples[0].task(3) == 1.5);   // task 3 measures on-paper time
  CHECK(ds.samples[0].task(7) == 15.0);  // clamped at the prescribed limit
  CHECK_FALSE(ds.samples[0].has_task(2));
}

TEST_CASE("recording CSV round-trips") {
  const SubjectRecording rec = parse_recording(kRecording);
  const SubjectRecording back = parse_recording(recording_csv(rec));
  CHECK(back.subject_id == rec.subject_id);
  CHECK(back.label == rec.label);
  REQUIRE(back.tasks.size() == rec.tasks.size());
  for (const auto& [task, tr] : rec.tasks) {
    const auto& btr = back.tasks.at(task);
    REQUIRE(btr.samples.size() == tr.samples.size());
    for (std::size_t i = 0; i < tr.samples.size(); ++i) {
      CHECK(btr.samples[i].t_ms == tr.samples[i].t_ms);
      CHECK(btr.samples[i].pressure == tr.samples[i].pressure);
      CHECK(btr.samples[i].x == tr.samples[i].x);
    }
  }
}

TEST_CASE("recording parser rejects bad input") {
  CHECK_THROWS_AS(parse_recording("task,t_ms,x,y,pressure,azimuth,altitude\n"), MalformedRow);
  CHECK_THROWS_AS(parse_recording("# subject: a\n1,0,0,0,1,0,0\n"), MalformedRow);
  CHECK_THROWS_AS(parse_recording("# subject: a\n# label: Foo\n"), UnknownLabel);

  const std::string head = "# subject: a\n# label: HC\n";
  // non-monotonic time within a task
  CHECK_THROWS_AS(parse_recording(head + "1,100,0,0,1,0,0\n1,100,0,0,1,0,0\n"),
                  NonMonotonicTime);
  CHECK_THROWS_AS(parse_recording(head + "1,100,0,0,1,0,0\n1,50,0,0,1,0,0\n"),
                  NonMonotonicTime);
  // split task block
  CHECK_THROWS_AS(
      parse_recording(head + "1,0,0,0,1,0,0\n2,0,0,0,1,0,0\n1,10,0,0,1,0,0\n"),
      MalformedRow);
  // task id out of range / short row / bad number
  CHECK_THROWS_AS(parse_recording(head + "8,0,0,0,1,0,0\n"), MalformedRow);
  CHECK_THROWS_AS(parse_recording(head + "1,0,0,0,1,0\n"), MalformedRow);
  CHECK_THROWS_AS(parse_recording(head + "1,0,x,0,1,0,0\n"), MalformedRow);
  // a task with no pen-down sample
  CHECK_THROWS_AS(parse_recording(head + "1,0,0,0,0,0,0\n1,10,0,0,0,0,0\n"), EmptyTask);

  const std::vector<SubjectRecording> dup = {parse_recording(head + "1,0,0,0,1,0,0\n"),
                                             parse_recording(head + "1,0,0,0,1,0,0\n")};
  CHECK_THROWS_AS(build_duration_dataset(dup, MeasurementMode(1)), DuplicateSubject);
}
