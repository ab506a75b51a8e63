//! CSV output: a comment line, a header row, then data rows.

pub fn num(x: f64) -> String {
    ryu::Buffer::new().format(x).to_string()
}

pub struct Table {
    text: String,
}

impl Table {
    pub fn new<S: AsRef<str>>(comment: &str, cols: &[S]) -> Self {
        let cols: Vec<&str> = cols.iter().map(|c| c.as_ref()).collect();
        Table {
            text: format!("{comment}\n{}\n", cols.join(",")),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn render(self) -> String {
        self.text
    }
}
