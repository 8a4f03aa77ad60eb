// Copyright (c) 2026 The svs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SVS_BASE_LOG_H_
#define SVS_BASE_LOG_H_

#include <sstream>

namespace svs {

enum class LogLevel { kDebug = 0, kInfo = 1, kWarning = 2, kError = 3 };

void SetLogLevel(LogLevel level);
LogLevel GetLogLevel();

// Buffers one message and writes it to stderr on destruction.
class LogMessage {
 public:
  LogMessage(LogLevel level, const char* file, int line);
  ~LogMessage();
  LogMessage(const LogMessage&) = delete;
  LogMessage& operator=(const LogMessage&) = delete;

  std::ostream& stream() { return stream_; }

 private:
  LogLevel level_;
  std::ostringstream stream_;
};

}  // namespace svs

#define SVS_LOG_DEBUG ::svs::LogLevel::kDebug
#define SVS_LOG_INFO ::svs::LogLevel::kInfo
#define SVS_LOG_WARNING ::svs::LogLevel::kWarning
#define SVS_LOG_ERROR ::svs::LogLevel::kError

#define SVS_LOG(severity)                                        \
  if (SVS_LOG_##severity < ::svs::GetLogLevel()) {               \
  } else                                                         \
    ::svs::LogMessage(SVS_LOG_##severity, __FILE__, __LINE__).stream()

#endif  // SVS_BASE_LOG_H_
