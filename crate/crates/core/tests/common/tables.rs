//! Reference decoder tables: syndrome signs, then the correction.

pub const SURFACE_X: &str = "
+1 +1 +1 +1 | I
+1 +1 +1 -1 | Z6
+1 +1 -1 +1 | Z5
+1 +1 -1 -1 | Z7
+1 -1 +1 +1 | Z0
+1 -1 +1 -1 | Z3Z6
+1 -1 -1 +1 | Z4
+1 -1 -1 -1 | Z4Z6
-1 +1 +1 +1 | Z2
-1 +1 +1 -1 | Z2Z6
-1 +1 -1 +1 | Z2Z5
-1 +1 -1 -1 | Z2Z7
-1 -1 +1 +1 | Z1
-1 -1 +1 -1 | Z1Z6
-1 -1 -1 +1 | Z2Z4
-1 -1 -1 -1 | Z1Z7
";

pub const SURFACE_Z: &str = "
+1 +1 +1 +1 | I
+1 +1 +1 -1 | X8
+1 +1 -1 +1 | X6
+1 +1 -1 -1 | X7X8
+1 -1 +1 +1 | X1
+1 -1 +1 -1 | X5
+1 -1 -1 +1 | X4
+1 -1 -1 -1 | X4X8
-1 +1 +1 +1 | X0
-1 +1 +1 -1 | X0X8
-1 +1 -1 +1 | X3
-1 +1 -1 -1 | X3X8
-1 -1 +1 +1 | X0X1
-1 -1 +1 -1 | X0X5
-1 -1 -1 +1 | X0X4
-1 -1 -1 -1 | X3X5
";

pub const BS_X: &str = "
+1 +1 | I
+1 -1 | Z2
-1 +1 | Z0
-1 -1 | Z1
";

pub const BS_Z: &str = "
+1 +1 | I
+1 -1 | X6
-1 +1 | X0
-1 -1 | X3
";

/// Rows as `(signs, correction)`.
pub fn rows(table: &str) -> Vec<(Vec<i8>, String)> {
    table
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (s, e) = l.split_once('|').unwrap();
            (s.split_whitespace().map(|v| v.parse().unwrap()).collect(), e.trim().to_string())
        })
        .collect()
}
