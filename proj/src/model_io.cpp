#include "laso/model_io.hpp"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "laso/errors.hpp"

namespace laso {

namespace {

constexpr char kMagic[8] = {'L', 'A', 'S', 'O', 'M', 'D', 'L', '\n'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

void put_f64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}

void put_str(std::ostream& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void put_table(std::ostream& out, const std::vector<std::string>& table) {
  put_u32(out, static_cast<std::uint32_t>(table.size()));
  for (const auto& s : table) put_str(out, s);
}

struct Reader {
  std::istream& in;
  const std::string& source;

  void bytes(char* dst, std::size_t n) {
    in.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) {
      throw DataError(source + ": truncated model file");
    }
  }

  std::uint32_t u32() {
    char b[4];
    bytes(b, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    }
    return v;
  }

  std::uint64_t u64() {
    char b[8];
    bytes(b, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    }
    return v;
  }

  double f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }

  std::uint8_t u8() {
    char b;
    bytes(&b, 1);
    return static_cast<std::uint8_t>(b);
  }

  std::string str() {
    const std::uint32_t n = u32();
    std::string s(n, '\0');
    if (n) bytes(s.data(), n);
    return s;
  }

  std::vector<std::string> table() {
    const std::uint32_t n = u32();
    std::vector<std::string> out;
    out.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(str());
    return out;
  }
};

std::uint32_t pack_templates(const FeatureTemplateConfig& cfg) {
  std::uint32_t m = 0;
  const bool flags[] = {cfg.word,         cfg.lower,
                        cfg.stem,         cfg.case_pattern,
                        cfg.affixes,      cfg.pos,
                        cfg.chunk_length, cfg.chunk_length_bucket,
                        cfg.gazetteers,   cfg.shapes};
  for (int i = 0; i < 10; ++i) m |= flags[i] ? (1u << i) : 0u;
  return m;
}

void unpack_templates(std::uint32_t m, FeatureTemplateConfig* cfg) {
  bool* flags[] = {&cfg->word,         &cfg->lower,
                   &cfg->stem,         &cfg->case_pattern,
                   &cfg->affixes,      &cfg->pos,
                   &cfg->chunk_length, &cfg->chunk_length_bucket,
                   &cfg->gazetteers,   &cfg->shapes};
  for (int i = 0; i < 10; ++i) *flags[i] = (m >> i) & 1u;
}

}  // namespace

const char* task_name(TaskKind task) {
  return task == TaskKind::kChunk ? "chunk" : "joint";
}

void save_model(std::ostream& out, const Model& model) {
  out.write(kMagic, 8);
  put_u32(out, kVersion);
  out.put(static_cast<char>(model.task));
  out.put(static_cast<char>(model.rule.kind));
  out.put(static_cast<char>(model.mode));
  out.put(model.averaged ? 1 : 0);
  put_f64(out, model.rule.alpha);
  put_f64(out, model.rule.b);
  put_f64(out, model.rule.c);
  put_u32(out, model.beam_train);
  put_u32(out, model.epochs);
  put_u64(out, model.seed);
  put_u32(out, static_cast<std::uint32_t>(model.cfg.max_chunk_length));
  put_u32(out, pack_templates(model.cfg));
  put_table(out, model.chunk_labels);
  put_table(out, model.pos_tags);
  put_table(out, model.gazetteer_names);
  put_table(out, model.feature_names);
  if (model.weights.size() != model.feature_names.size()) {
    throw std::logic_error("model weights not parallel to feature names");
  }
  for (double w : model.weights) put_f64(out, w);
  if (!out) throw DataError("model write failed");
}

void save_model_file(const std::string& path, const Model& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write model file: " + path);
  save_model(out, model);
}

Model load_model(std::istream& in, const std::string& source_name) {
  Reader r{in, source_name};
  char magic[8];
  r.bytes(magic, 8);
  if (std::memcmp(magic, kMagic, 8) != 0) {
    throw DataError(source_name + ": not a model file (bad magic)");
  }
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw DataError(source_name + ": unsupported model version " +
                    std::to_string(version));
  }

  Model m;
  const std::uint8_t task = r.u8();
  if (task > 1) throw DataError(source_name + ": unknown task id");
  m.task = static_cast<TaskKind>(task);
  const std::uint8_t rule = r.u8();
  if (rule > 1) throw DataError(source_name + ": unknown update rule");
  m.rule.kind = static_cast<UpdateRule::Kind>(rule);
  const std::uint8_t mode = r.u8();
  if (mode > 2) throw DataError(source_name + ": unknown update mode");
  m.mode = static_cast<UpdateMode>(mode);
  m.averaged = r.u8() != 0;
  m.rule.alpha = r.f64();
  m.rule.b = r.f64();
  m.rule.c = r.f64();
  m.beam_train = r.u32();
  m.epochs = r.u32();
  m.seed = r.u64();
  m.cfg.max_chunk_length = static_cast<int>(r.u32());
  unpack_templates(r.u32(), &m.cfg);
  m.chunk_labels = r.table();
  m.pos_tags = r.table();
  m.gazetteer_names = r.table();
  m.feature_names = r.table();
  m.weights.reserve(m.feature_names.size());
  for (std::size_t i = 0; i < m.feature_names.size(); ++i) {
    m.weights.push_back(r.f64());
  }
  return m;
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read model file: " + path);
  return load_model(in, path);
}

}  // namespace laso
