// SPDX-License-Identifier: Apache-2.0

#include "rbhier/container.hpp"

#include <fstream>

namespace rbhier
{

namespace
{

constexpr char magic[4] = {'R', 'B', 'H', 'C'};

template <typename T>
void write_pod(std::ostream &os, const T &v)
{
  os.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream &is)
{
  T v{};
  if (!is.read(reinterpret_cast<char *>(&v), sizeof(T)))
  {
    throw IoError("container: truncated file");
  }
  return v;
}

}  // namespace

void Container::put_scalar(const std::string &name, double v)
{
  put(name, RealMatrix(RealMatrix::Constant(1, 1, v)));
}

const Matrix &Container::complex_matrix(const std::string &name) const
{
  auto it = entries_.find(name);
  if (it == entries_.end() || !std::holds_alternative<Matrix>(it->second))
  {
    throw IoError("container: no complex entry '" + name + "'");
  }
  return std::get<Matrix>(it->second);
}

const RealMatrix &Container::real_matrix(const std::string &name) const
{
  auto it = entries_.find(name);
  if (it == entries_.end() || !std::holds_alternative<RealMatrix>(it->second))
  {
    throw IoError("container: no real entry '" + name + "'");
  }
  return std::get<RealMatrix>(it->second);
}

const std::string &Container::text(const std::string &name) const
{
  auto it = entries_.find(name);
  if (it == entries_.end() || !std::holds_alternative<std::string>(it->second))
  {
    throw IoError("container: no text entry '" + name + "'");
  }
  return std::get<std::string>(it->second);
}

double Container::scalar(const std::string &name) const
{
  const auto &m = real_matrix(name);
  if (m.size() != 1)
  {
    throw IoError("container: entry '" + name + "' is not a scalar");
  }
  return m(0, 0);
}

void Container::save(const std::filesystem::path &path) const
{
  if (path.has_parent_path())
  {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os)
  {
    throw IoError("container: cannot write " + path.string());
  }
  os.write(magic, 4);
  write_pod(os, version);
  write_pod(os, static_cast<std::uint64_t>(entries_.size()));
  for (const auto &[name, value] : entries_)
  {
    write_pod(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    std::visit(
      [&](const auto &v)
      {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>)
        {
          write_pod(os, std::uint8_t{2});
          write_pod(os, static_cast<std::uint64_t>(v.size()));
          write_pod(os, std::uint64_t{1});
          os.write(v.data(), static_cast<std::streamsize>(v.size()));
        }
        else
        {
          write_pod(os, std::uint8_t{std::is_same_v<T, Matrix> ? 1 : 0});
          write_pod(os, static_cast<std::uint64_t>(v.rows()));
          write_pod(os, static_cast<std::uint64_t>(v.cols()));
          os.write(reinterpret_cast<const char *>(v.data()),
                   static_cast<std::streamsize>(v.size() * sizeof(typename T::Scalar)));
        }
      },
      value);
  }
  if (!os)
  {
    throw IoError("container: write failed for " + path.string());
  }
}

Container Container::load(const std::filesystem::path &path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is)
  {
    throw IoError("container: cannot open " + path.string());
  }
  char head[4];
  if (!is.read(head, 4) || std::string(head, 4) != std::string(magic, 4))
  {
    throw IoError("container: bad magic in " + path.string());
  }
  if (read_pod<std::uint32_t>(is) != version)
  {
    throw IoError("container: unsupported version in " + path.string());
  }
  Container c;
  const auto count = read_pod<std::uint64_t>(is);
  for (std::uint64_t e = 0; e < count; e++)
  {
    std::string name(read_pod<std::uint32_t>(is), '\0');
    is.read(name.data(), static_cast<std::streamsize>(name.size()));
    const auto kind = read_pod<std::uint8_t>(is);
    const auto rows = read_pod<std::uint64_t>(is);
    const auto cols = read_pod<std::uint64_t>(is);
    if (kind == 2)
    {
      std::string text(rows, '\0');
      is.read(text.data(), static_cast<std::streamsize>(rows));
      c.entries_[name] = std::move(text);
    }
    else if (kind == 0 || kind == 1)
    {
      auto read_matrix = [&](auto m)
      {
        using T = decltype(m);
        m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        is.read(reinterpret_cast<char *>(m.data()),
                static_cast<std::streamsize>(m.size() * sizeof(typename T::Scalar)));
        c.entries_[name] = std::move(m);
      };
      kind == 0 ? read_matrix(RealMatrix()) : read_matrix(Matrix());
    }
    else
    {
      throw IoError("container: unknown entry kind in " + path.string());
    }
    if (!is)
    {
      throw IoError("container: truncated entry '" + name + "'");
    }
  }
  return c;
}

}  // namespace rbhier
