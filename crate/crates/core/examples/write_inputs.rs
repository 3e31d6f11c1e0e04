//! Writes sample profile and corner files for the command-line tool.

use bartnik::io::{corner_json, profile_json};
use bartnik::radial_geometry::{flat_ball, flat_exterior, SchwarzschildSlice};
use bartnik::verify::{ball_corner, neck_profile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).map(std::path::PathBuf::from).unwrap_or_else(|| "inputs".into());
    std::fs::create_dir_all(&dir)?;
    let files = [
        ("flat.json", profile_json(&flat_exterior(1.0, 1e3, 400)?)),
        ("schwarzschild.json", profile_json(&SchwarzschildSlice { mass: 1.0 }.exterior(3.0, 1e4, 3000)?)),
        ("neck.json", profile_json(&neck_profile(1.0, 0.1)?)),
        ("ball.json", profile_json(&flat_ball(1.0, 0.05, 200)?)),
        ("corner.json", corner_json(&ball_corner(0.1)?)),
    ];
    for (name, text) in files {
        std::fs::write(dir.join(name), text)?;
        println!("wrote {}", dir.join(name).display());
    }
    Ok(())
}
