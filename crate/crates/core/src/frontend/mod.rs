//! DSL frontend: parser, pipeline driver, report emitters.
