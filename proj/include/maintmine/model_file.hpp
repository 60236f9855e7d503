#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>
#include <zlib.h>

#include "maintmine/compound.hpp"

namespace maintmine {

// Model file layout:
//
//   MMCM <version>\n
//   <JSON body on one line>\n
//   checksum <crc32 of the body line, 8 lowercase hex digits>\n
inline constexpr int kModelFormatVersion = 1;

class VersionError : public DataError {
public:
  explicit VersionError(long version)
      : DataError("model file format version " + std::to_string(version) + " is not supported (this build reads " +
                  std::to_string(kModelFormatVersion) + ")") {}
};

class ChecksumError : public DataError {
public:
  using DataError::DataError;
};

inline std::string crc32_hex(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef *>(bytes.data()), static_cast<uInt>(bytes.size()));
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
  return buf;
}

inline nlohmann::json compound_to_json(const CompoundModel &m) {
  nlohmann::json j;
  j["spec"] = m.spec;
  j["vocabulary"] = {{"words", m.vocabulary.words},
                     {"aliases", m.vocabulary.aliases},
                     {"provenance", m.vocabulary.provenance == VocabularyProvenance::builtin ? "builtin" : "derived"}};
  j["stopwords"] = {{"english", m.stopwords.english_stopwords}, {"custom", m.stopwords.custom_words}};
  j["taxonomy"] = m.taxonomy;
  j["kw_model"] = m.kw_model ? model_to_json(*m.kw_model) : nlohmann::json(nullptr);
  j["nokw_model"] = m.nokw_model ? model_to_json(*m.nokw_model) : nlohmann::json(nullptr);
  j["naive"] = m.naive ? nlohmann::json(*m.naive) : nlohmann::json(nullptr);
  return j;
}

inline CompoundModel compound_from_json(const nlohmann::json &j) {
  CompoundModel m;
  j.at("spec").get_to(m.spec);
  j.at("vocabulary").at("words").get_to(m.vocabulary.words);
  j.at("vocabulary").at("aliases").get_to(m.vocabulary.aliases);
  m.vocabulary.provenance = j.at("vocabulary").at("provenance").get<std::string>() == "builtin"
                                ? VocabularyProvenance::builtin
                                : VocabularyProvenance::derived;
  j.at("stopwords").at("english").get_to(m.stopwords.english_stopwords);
  j.at("stopwords").at("custom").get_to(m.stopwords.custom_words);
  j.at("taxonomy").get_to(m.taxonomy);
  if (!j.at("kw_model").is_null())
    m.kw_model = model_from_json(j.at("kw_model"));
  if (!j.at("nokw_model").is_null())
    m.nokw_model = model_from_json(j.at("nokw_model"));
  if (!j.at("naive").is_null())
    m.naive = j.at("naive").get<NaiveModel>();

  if (m.taxonomy.size() != kNumChangeTypes)
    throw DataError("model taxonomy must have " + std::to_string(kNumChangeTypes) + " labels");
  if (!m.naive) {
    if (!m.kw_model)
      throw DataError("model file has no components");
    if (model_width(*m.kw_model) != feature_width(m.spec.kw, m.vocabulary.size()))
      throw DataError("kw component width does not match its model type");
    if (m.nokw_model && model_width(*m.nokw_model) != feature_width(m.spec.nokw, m.vocabulary.size()))
      throw DataError("nokw component width does not match its model type");
    if (!m.nokw_model && m.spec.kw != m.spec.nokw)
      throw DataError("model file lacks the nokw component");
  }
  return m;
}

inline std::string serialize_model(const CompoundModel &m) {
  const std::string body = compound_to_json(m).dump();
  return "MMCM " + std::to_string(kModelFormatVersion) + "\n" + body + "\nchecksum " + crc32_hex(body) + "\n";
}

inline CompoundModel deserialize_model(const std::string &bytes) {
  std::istringstream in(bytes);
  std::string header, body, trailer;
  std::getline(in, header);
  if (!header.starts_with("MMCM "))
    throw DataError("not a model file (missing MMCM header)");
  long version = 0;
  try {
    std::size_t used = 0;
    version = std::stol(header.substr(5), &used);
    if (used != header.size() - 5)
      throw std::invalid_argument("trailing text");
  } catch (const std::logic_error &) {
    throw DataError("malformed model file header '" + header + "'");
  }
  if (version != kModelFormatVersion)
    throw VersionError(version);
  if (!std::getline(in, body) || !std::getline(in, trailer) || !trailer.starts_with("checksum "))
    throw ChecksumError("model file is truncated (checksum line missing)");
  if (trailer.substr(9) != crc32_hex(body))
    throw ChecksumError("model file checksum mismatch");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
    return compound_from_json(j);
  } catch (const nlohmann::json::exception &e) {
    throw DataError(std::string("malformed model body: ") + e.what());
  }
}

inline CompoundModel load_model(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DataError("cannot open model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_model(ss.str());
}

} // namespace maintmine
