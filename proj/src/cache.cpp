#include "dedekind/cache.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include <fmt/format.h>

namespace dedekind {

std::filesystem::path splitting_cache_path(const std::filesystem::path& dir, const std::string& field_hash,
                                           std::uint64_t bound) {
  return dir / fmt::format("splitting-{}-{}.txt", field_hash, bound);
}

std::optional<SplittingTable> load_splitting_cache(const std::filesystem::path& dir, const FieldSpec& field,
                                                   std::uint64_t bound) {
  std::ifstream in(splitting_cache_path(dir, field.content_hash(), bound));
  if (!in) return std::nullopt;
  std::string magic, version, key, hash;
  std::uint64_t stored_bound = 0, count = 0;
  unsigned degree = 0;
  in >> magic >> version;
  if (magic != "dedekind-splitting-table" || version != fmt::format("v{}", kSplittingCacheVersion)) return std::nullopt;
  if (!(in >> key >> hash) || key != "field" || hash != field.content_hash()) return std::nullopt;
  if (!(in >> key >> stored_bound) || key != "bound" || stored_bound != bound) return std::nullopt;
  if (!(in >> key >> degree) || key != "degree" || degree != field.degree()) return std::nullopt;
  if (!(in >> key >> count) || key != "count") return std::nullopt;
  in.ignore(1, '\n');

  SplittingTable table(hash, bound, degree);
  std::string line;
  std::vector<SplitFactor> factors;
  try {
  for (std::uint64_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) return std::nullopt;
    std::istringstream row(line);
    std::uint64_t p = 0;
    if (!(row >> p)) return std::nullopt;
    factors.clear();
    std::string item;
    while (row >> item) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) return std::nullopt;
      factors.push_back({static_cast<unsigned>(std::stoul(item.substr(0, colon))),
                         static_cast<unsigned>(std::stoul(item.substr(colon + 1)))});
    }
    table.append(p, factors);
  }
  } catch (const std::exception&) {
    return std::nullopt;  // damaged entry
  }
  if (std::getline(in, line) && !line.empty()) return std::nullopt;
  return table;
}

void save_splitting_cache(const std::filesystem::path& dir, const SplittingTable& table) {
  std::filesystem::create_directories(dir);
  const auto target = splitting_cache_path(dir, table.field_hash(), table.bound());
  auto temp = target;
  temp += fmt::format(".tmp{}", static_cast<unsigned long long>(std::hash<std::string>{}(target.string()) & 0xffff));
  {
    std::ofstream out(temp, std::ios::trunc);
    if (!out) throw Error("cannot write cache file " + temp.string());
    out << "dedekind-splitting-table v" << kSplittingCacheVersion << '\n'
        << "field " << table.field_hash() << '\n'
        << "bound " << table.bound() << '\n'
        << "degree " << table.degree() << '\n'
        << "count " << table.size() << '\n';
    for (std::size_t i = 0; i < table.size(); ++i) {
      out << table.prime(i);
      for (const auto& s : table.factors(i)) out << ' ' << s.e << ':' << s.f;
      out << '\n';
    }
    if (!out) throw Error("failed writing cache file " + temp.string());
  }
  std::filesystem::rename(temp, target);
}

SplittingTable cached_splitting_table(const std::filesystem::path& dir, const FieldSpec& field, std::uint64_t bound,
                                      bool* hit) {
  if (hit) *hit = false;
  if (dir.empty()) return SplittingTable::build(field, bound);
  if (auto table = load_splitting_cache(dir, field, bound)) {
    if (hit) *hit = true;
    return std::move(*table);
  }
  SplittingTable table = SplittingTable::build(field, bound);
  save_splitting_cache(dir, table);
  return table;
}

}  // namespace dedekind
