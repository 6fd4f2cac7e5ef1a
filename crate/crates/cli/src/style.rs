use std::io::IsTerminal;

pub const NO_COLOR_ENV: &str = "VOLCAST_NO_COLOR";

pub fn color_enabled() -> bool {
    std::env::var_os(NO_COLOR_ENV).is_none() && std::io::stderr().is_terminal()
}

fn paint(text: &str, code: &str) -> String {
    if color_enabled() {
        format!("\x1b[{code}m{text}\x1b[0m")
    } else {
        text.to_string()
    }
}

pub fn pass(text: &str) -> String {
    paint(text, "32")
}

pub fn fail(text: &str) -> String {
    paint(text, "31")
}

pub fn warn(text: &str) -> String {
    paint(text, "33")
}
