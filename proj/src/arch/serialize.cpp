#include "magrecon/arch/serialize.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace magrecon::arch {

namespace {

void print_step(std::ostream& os, const Step& step) {
  os << to_string(step.type);
  if (const auto* c = std::get_if<ConvParams>(&step.params)) {
    os << " s_in=" << c->s_in << " s_out=" << c->s_out << " k=" << c->kernel
       << " stride=" << c->stride << " pad=" << c->padding
       << " dil=" << c->dilation << " c_in=" << c->c_in
       << " c_out=" << c->c_out;
  } else if (const auto* f = std::get_if<FcParams>(&step.params)) {
    os << " n_in=" << f->in_features << " n_out=" << f->out_features;
  } else if (const auto* l = std::get_if<LstmParams>(&step.params)) {
    os << " n_in=" << l->in_features << " hidden=" << l->hidden
       << " seq=" << l->seq_len;
  } else if (const auto* p = std::get_if<PoolParams>(&step.params)) {
    os << " s_in=" << p->s_in << " s_out=" << p->s_out << " k=" << p->kernel
       << " stride=" << p->stride << " pad=" << p->padding
       << " c=" << p->channels;
  } else {
    const auto& e = std::get<ElemwiseParams>(step.params);
    os << " c=" << e.shape.channels << " h=" << e.shape.height
       << " w=" << e.shape.width;
  }
}

using KvMap = std::map<std::string, int>;

int need(const KvMap& kv, const std::string& key, int line_no) {
  auto it = kv.find(key);
  if (it == kv.end()) {
    std::ostringstream os;
    os << "line " << line_no << ": missing key '" << key << "'";
    throw ParseError(os.str());
  }
  return it->second;
}

Step parse_step(StepType type, const KvMap& kv, int line_no) {
  switch (type) {
    case StepType::Conv:
      return Step::conv({need(kv, "s_in", line_no), need(kv, "s_out", line_no),
                         need(kv, "k", line_no), need(kv, "stride", line_no),
                         need(kv, "pad", line_no), need(kv, "dil", line_no),
                         need(kv, "c_in", line_no), need(kv, "c_out", line_no)});
    case StepType::FullyConnected:
      return Step::fully_connected(need(kv, "n_in", line_no),
                                   need(kv, "n_out", line_no));
    case StepType::Lstm:
      return Step::lstm({need(kv, "n_in", line_no), need(kv, "hidden", line_no),
                         need(kv, "seq", line_no)});
    case StepType::MaxPool:
    case StepType::AvgPool:
      return Step::pool(type, {need(kv, "s_in", line_no),
                               need(kv, "s_out", line_no),
                               need(kv, "k", line_no),
                               need(kv, "stride", line_no),
                               need(kv, "pad", line_no),
                               need(kv, "c", line_no)});
    default:
      return Step::elemwise(type, {need(kv, "c", line_no),
                                   need(kv, "h", line_no),
                                   need(kv, "w", line_no)});
  }
}

}  // namespace

std::string print_network(const NetworkSpec& spec) {
  std::ostringstream os;
  if (!spec.name.empty()) os << "name " << spec.name << "\n";
  os << "input " << spec.input.channels << " " << spec.input.height << " "
     << spec.input.width << "\n";
  for (std::size_t i = 0; i < spec.steps.size(); ++i) {
    os << i << " ";
    print_step(os, spec.steps[i]);
    os << "\n";
  }
  return os.str();
}

NetworkSpec parse_network(const std::string& text) {
  NetworkSpec spec;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool saw_input = false;
  int next_index = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    if (first == "name") {
      ls >> spec.name;
      continue;
    }
    if (first == "input") {
      if (!(ls >> spec.input.channels >> spec.input.height >> spec.input.width))
        throw ParseError("line " + std::to_string(line_no) +
                         ": malformed input header");
      saw_input = true;
      continue;
    }
    if (!saw_input)
      throw ParseError("line " + std::to_string(line_no) +
                       ": step before input header");
    int index = -1;
    try {
      index = std::stoi(first);
    } catch (...) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected step index, got '" + first + "'");
    }
    if (index != next_index)
      throw ParseError("line " + std::to_string(line_no) +
                       ": step index out of order");
    ++next_index;
    std::string type_str;
    ls >> type_str;
    const auto type = step_type_from_string(type_str);
    if (!type)
      throw ParseError("line " + std::to_string(line_no) +
                       ": unknown step type '" + type_str + "'");
    KvMap kv;
    std::string kvtok;
    while (ls >> kvtok) {
      const auto eq = kvtok.find('=');
      if (eq == std::string::npos)
        throw ParseError("line " + std::to_string(line_no) +
                         ": malformed key=value '" + kvtok + "'");
      try {
        kv[kvtok.substr(0, eq)] = std::stoi(kvtok.substr(eq + 1));
      } catch (...) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": non-integer value in '" + kvtok + "'");
      }
    }
    spec.steps.push_back(parse_step(*type, kv, line_no));
  }
  if (!saw_input) throw ParseError("missing input header");
  return spec;
}

void save_network(const NetworkSpec& spec, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out << print_network(spec);
}

NetworkSpec load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_network(ss.str());
}

}  // namespace magrecon::arch
