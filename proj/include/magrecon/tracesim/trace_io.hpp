#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "magrecon/tracesim/trace.hpp"

namespace magrecon::tracesim {

// Parse failures report the byte offset of the offending content.
struct TraceIoError : std::runtime_error {
  explicit TraceIoError(const std::string& what, std::uint64_t offset);
  std::uint64_t byte_offset = 0;
};

// Trace file: little-endian binary — magic "MTRC", u32 version=1,
// f64 sample_rate, u64 n, then n float32 samples.
// Annotation sidecar: text, one span per line `start end label step_index`.
void write_trace(const Trace& trace, const Annotation& ann,
                 const std::string& trace_path, const std::string& ann_path);
std::pair<Trace, Annotation> read_trace(const std::string& trace_path,
                                        const std::string& ann_path);

}  // namespace magrecon::tracesim
