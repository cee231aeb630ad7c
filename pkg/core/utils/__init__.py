# Logging, errors, run state helpers
