#include <doctest.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include "rbhier/container.hpp"

using namespace rbhier;

namespace
{

std::string slurp(const std::filesystem::path &p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("container round trip and deterministic bytes")
{
  const auto dir = std::filesystem::temp_directory_path() / "rbhier_container_test";
  std::filesystem::create_directories(dir);
  Container c;
  const Matrix z = Matrix::Random(4, 3);
  const RealMatrix r = RealMatrix::Random(2, 5);
  c.put("z", z);
  c.put("r", r);
  c.put_text("note", "snapshot log\nline 2");
  c.put_scalar("s", 0.125);
  c.save(dir / "a.rbh");

  const auto back = Container::load(dir / "a.rbh");
  CHECK(back.complex_matrix("z") == z);
  CHECK(back.real_matrix("r") == r);
  CHECK(back.text("note") == "snapshot log\nline 2");
  CHECK(back.scalar("s") == 0.125);
  CHECK_FALSE(back.has("missing"));
  CHECK_THROWS_AS(back.real_matrix("z"), IoError);

  back.save(dir / "b.rbh");
  CHECK(slurp(dir / "a.rbh") == slurp(dir / "b.rbh"));

  std::ofstream(dir / "bad.rbh") << "not a container";
  CHECK_THROWS_AS(Container::load(dir / "bad.rbh"), IoError);
  CHECK_THROWS_AS(Container::load(dir / "none.rbh"), IoError);
  std::filesystem::remove_all(dir);
}
