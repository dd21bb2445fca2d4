//! Drive the command-line interface in-process: render, extract, score.

use bezier_glyph::cli::run;

fn bg(args: &[&str]) -> (i32, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("bezier-glyph").chain(args.iter().copied()), &mut out, &mut err);
    let text = String::from_utf8_lossy(&out).into_owned() + &String::from_utf8_lossy(&err);
    (code, text)
}

fn main() {
    let dir = std::env::temp_dir().join("bezier-glyph-cli-example");
    std::fs::create_dir_all(&dir).unwrap();
    let path = |name: &str| dir.join(name).display().to_string();

    std::fs::write(
        path("gt.bezierseq"),
        "<bezierseq><bezier>(0.1 0.5) (0.9 0.5)</bezier><bezier>(0.5 0.1) (0.5 0.9)</bezier></bezierseq>\n",
    )
    .unwrap();

    let steps: [Vec<String>; 4] = [
        vec!["render".into(), path("gt.bezierseq"), "--png".into(), path("gt.png"), "--size".into(), "256".into()],
        vec!["extract".into(), path("gt.png"), "--out".into(), path("out")],
        vec!["score".into(), path("gt.bezierseq"), dir.join("out").join("gt.bezierseq").display().to_string()],
        vec!["winrate".into(), "142".into(), "7".into(), "1".into()],
    ];
    for step in &steps {
        let args: Vec<&str> = step.iter().map(String::as_str).collect();
        let (code, text) = bg(&args);
        println!("$ bezier-glyph {} -> exit {code}\n{text}", step[0]);
    }
}

#[cfg(test)]
#[test]
fn example_runs() {
    main();
}
