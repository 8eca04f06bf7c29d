#include "magrecon/tracesim/trace_io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace magrecon::tracesim {

namespace {

constexpr char kMagic[4] = {'M', 'T', 'R', 'C'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in, std::uint64_t& offset, const char* what) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in)
    throw TraceIoError(std::string("truncated while reading ") + what, offset);
  offset += sizeof(T);
  return v;
}

}  // namespace

TraceIoError::TraceIoError(const std::string& what, std::uint64_t offset)
    : std::runtime_error(what + " (byte offset " + std::to_string(offset) + ")"),
      byte_offset(offset) {}

void write_trace(const Trace& trace, const Annotation& ann,
                 const std::string& trace_path, const std::string& ann_path) {
  std::ofstream out(trace_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + trace_path);
  out.write(kMagic, 4);
  put(out, kVersion);
  put(out, trace.sample_rate);
  put(out, static_cast<std::uint64_t>(trace.samples.size()));
  out.write(reinterpret_cast<const char*>(trace.samples.data()),
            static_cast<std::streamsize>(sizeof(float) * trace.samples.size()));
  if (!out) throw std::runtime_error("short write: " + trace_path);

  std::ofstream aout(ann_path, std::ios::binary);
  if (!aout) throw std::runtime_error("cannot open for write: " + ann_path);
  for (const Span& s : ann.spans)
    aout << s.begin << " " << s.end << " " << label_name(s.label) << " "
         << s.step_index << "\n";
}

std::pair<Trace, Annotation> read_trace(const std::string& trace_path,
                                        const std::string& ann_path) {
  std::ifstream in(trace_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + trace_path);
  std::uint64_t offset = 0;

  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw TraceIoError("bad magic, not a trace file", 0);
  offset = 4;
  const auto version = get<std::uint32_t>(in, offset, "version");
  if (version != kVersion)
    throw TraceIoError("unsupported trace version " + std::to_string(version),
                       4);
  Trace trace;
  trace.sample_rate = get<double>(in, offset, "sample_rate");
  if (!(trace.sample_rate > 0))
    throw TraceIoError("non-positive sample rate", 8);
  const auto n = get<std::uint64_t>(in, offset, "sample count");
  trace.samples.resize(static_cast<Eigen::Index>(n));
  in.read(reinterpret_cast<char*>(trace.samples.data()),
          static_cast<std::streamsize>(sizeof(float) * n));
  if (static_cast<std::uint64_t>(in.gcount()) != sizeof(float) * n)
    throw TraceIoError("truncated sample payload",
                       offset + static_cast<std::uint64_t>(in.gcount()));

  Annotation ann;
  std::ifstream ain(ann_path, std::ios::binary);
  if (!ain) throw std::runtime_error("cannot open: " + ann_path);
  std::string line;
  std::uint64_t line_start = 0;
  std::int64_t expect_begin = 0;
  while (std::getline(ain, line)) {
    const std::uint64_t this_start = line_start;
    line_start += line.size() + 1;
    if (line.empty()) continue;
    std::istringstream ls(line);
    Span s;
    std::string label;
    if (!(ls >> s.begin >> s.end >> label >> s.step_index))
      throw TraceIoError("malformed span line", this_start);
    const auto lbl = label_from_name(label);
    if (!lbl) throw TraceIoError("unknown span label '" + label + "'", this_start);
    s.label = *lbl;
    if (s.begin < expect_begin)
      throw TraceIoError("span overlaps previous span", this_start);
    if (s.begin > expect_begin)
      throw TraceIoError("gap before span", this_start);
    if (s.end <= s.begin) throw TraceIoError("empty or inverted span", this_start);
    expect_begin = s.end;
    ann.spans.push_back(s);
  }
  if (expect_begin != static_cast<std::int64_t>(n))
    throw TraceIoError("spans do not cover the trace", line_start);
  return {std::move(trace), std::move(ann)};
}

}  // namespace magrecon::tracesim
