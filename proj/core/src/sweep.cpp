#include "chainsync/errors.hpp"
#include "chainsync/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <thread>

namespace chainsync {

namespace fs = std::filesystem;

SweepResult sweep_plug_site(const ScenarioSpec& spec, int first, int last, int workers) {
  spec.validate();
  if (first < 1 || last > spec.network.M || first > last)
    throw RangeError("sweep range must satisfy 1 <= first <= last <= M");

  SweepResult out;
  out.rows.resize(static_cast<std::size_t>(last - first + 1));
  std::atomic<int> next{0};
  const int count = last - first + 1;

  auto work = [&] {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      SweepRow& row = out.rows[static_cast<std::size_t>(i)];
      row.site = first + i;
      try {
        ScenarioSpec s = spec;
        s.probes.site_n = row.site;
        s.run.quantum = false;
        s.measure.delay_scan = 0.0;
        ScenarioResult r = simulate(s);
        row.times = std::move(r.sync_means.times);
        row.C = std::move(r.sync_means.values);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };

  const int n = std::clamp(workers, 1, count);
  std::vector<std::thread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

std::vector<fs::path> write_sweep(const SweepResult& sweep, const ScenarioSpec& spec,
                                  const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir))
    throw IoError("cannot create output directory " + out_dir.string());

  std::vector<fs::path> written;
  auto emit = [&](const std::string& name, const std::string& body) {
    const fs::path p = out_dir / name;
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (f) {
      written.push_back(p);
      f << body;
      f.flush();
    }
    if (!f) {
      for (const fs::path& w : written) fs::remove(w, ec);
      throw IoError("cannot write " + p.string());
    }
  };

  emit("resolved_config.ini", resolved_config(spec));
  std::string grid = "site,t_start,C\n";
  std::string errors;
  for (const SweepRow& row : sweep.rows) {
    if (!row.error.empty()) {
      errors += std::to_string(row.site) + ": " + row.error + "\n";
      continue;
    }
    for (std::size_t i = 0; i < row.times.size(); ++i)
      grid += std::to_string(row.site) + ',' + format_number(row.times[i]) + ',' +
              (row.C[i] ? format_number(*row.C[i]) : std::string()) + '\n';
  }
  emit("sweep.csv", grid);
  if (!errors.empty()) emit("sweep_errors.txt", errors);
  return written;
}

}  // namespace chainsync
