#pragma once

#include "ergoscope/config.hpp"
#include "ergoscope/design.hpp"
#include "ergoscope/io.hpp"
#include "ergoscope/optimizer.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace ergoscope {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitConfig = 2,
    kExitDegenerate = 3,
    kExitNumerical = 4,
};

/// Writes named artifacts into one directory. Each file goes to a
/// temporary name first and is renamed on success; rollback() deletes
/// everything written so far.
class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path directory);

    std::filesystem::path write(const std::string& name, const std::function<void(std::ostream&)>& body);
    void rollback() noexcept;
    const std::vector<std::filesystem::path>& written() const { return written_; }

private:
    std::filesystem::path directory_;
    std::vector<std::filesystem::path> written_;
};

std::string format_evaluation_report(const DesignEvaluation& eval, const RunConfig& cfg,
                                     const Provenance& prov);
std::string format_optimization_report(const OptimizationResult& result, const RunConfig& cfg,
                                       const Provenance& prov);

/// Entry point of the `ergoscope` executable.
int cli_main(int argc, const char* const* argv);

}  // namespace ergoscope
