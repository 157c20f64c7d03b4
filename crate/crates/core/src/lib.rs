//! Finalized context-free languages: grammars whose sentential forms are
//! filtered through a final language, plus the grammar constructions that
//! compile them back into ordinary context-free grammars.

pub mod cli;
pub mod exec;
pub mod final_lang;
pub mod finalization;
pub mod grammar;
pub mod queue;
pub mod re_cfg;
pub mod regular;
pub mod symbol;
pub mod text;
