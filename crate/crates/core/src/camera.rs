//! Ground-plane classification of a two-subject shot into the five
//! dialogue camera views.
//!
//! Subject A is screen-left by convention: the camera is assumed to stay on
//! one side of the line of interest through the two subjects.

use core::fmt;

use serde::{Deserialize, Serialize};

/// Default relative tolerance for calling two subject distances equal.
pub const DEFAULT_APEX_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    fn sub(self, other: Point2) -> Point2 {
        Point2::new(self.x - other.x, self.y - other.y)
    }

    fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViewClass {
    InternalLeft,
    ExternalLeft,
    Apex,
    ExternalRight,
    InternalRight,
}

impl ViewClass {
    /// Class of a slider position: the internal views are the exact limits.
    pub fn of_slider(u: f64) -> ViewClass {
        if u <= -1.0 {
            ViewClass::InternalLeft
        } else if u < 0.0 {
            ViewClass::ExternalLeft
        } else if u == 0.0 {
            ViewClass::Apex
        } else if u < 1.0 {
            ViewClass::ExternalRight
        } else {
            ViewClass::InternalRight
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CameraError {
    CoincidentSubjects,
    ZeroLookDirection,
    InvalidFieldOfView(f64),
    CameraAtSubject,
    NoSubjectVisible,
}

impl fmt::Display for CameraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::CoincidentSubjects => f.write_str("subjects coincide, there is no line of interest"),
            Self::ZeroLookDirection => f.write_str("look direction has zero length"),
            Self::InvalidFieldOfView(t) => {
                write!(f, "half field of view {t} must lie in (0, pi/2)")
            }
            Self::CameraAtSubject => f.write_str("camera coincides with a subject"),
            Self::NoSubjectVisible => f.write_str("neither subject is inside the camera frustum"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraScene {
    camera: Point2,
    subject_a: Point2,
    subject_b: Point2,
    look: Point2,
    half_fov: f64,
    apex_tolerance: f64,
}

impl CameraScene {
    /// `look` is normalized here, so callers may pass any non-zero vector.
    pub fn new(
        camera: Point2,
        subject_a: Point2,
        subject_b: Point2,
        look: Point2,
        half_fov: f64,
    ) -> Result<Self, CameraError> {
        if subject_a == subject_b {
            return Err(CameraError::CoincidentSubjects);
        }
        let len = look.norm();
        if !(len.is_finite() && len > 0.0) {
            return Err(CameraError::ZeroLookDirection);
        }
        if !(half_fov > 0.0 && half_fov < core::f64::consts::FRAC_PI_2) {
            return Err(CameraError::InvalidFieldOfView(half_fov));
        }
        Ok(Self {
            camera,
            subject_a,
            subject_b,
            look: Point2::new(look.x / len, look.y / len),
            half_fov,
            apex_tolerance: DEFAULT_APEX_TOLERANCE,
        })
    }

    pub fn with_apex_tolerance(mut self, tolerance: f64) -> Self {
        self.apex_tolerance = tolerance;
        self
    }

    pub fn camera(&self) -> Point2 {
        self.camera
    }

    pub fn subjects(&self) -> (Point2, Point2) {
        (self.subject_a, self.subject_b)
    }

    pub fn look(&self) -> Point2 {
        self.look
    }

    pub fn half_fov(&self) -> f64 {
        self.half_fov
    }

    pub fn apex_tolerance(&self) -> f64 {
        self.apex_tolerance
    }

    fn sees(&self, subject: Point2) -> bool {
        let to = subject.sub(self.camera);
        let cos = to.dot(self.look) / to.norm();
        libm::acos(cos.clamp(-1.0, 1.0)) <= self.half_fov
    }
}

pub fn classify_camera_view(scene: &CameraScene) -> Result<ViewClass, CameraError> {
    let d_a = scene.subject_a.sub(scene.camera).norm();
    let d_b = scene.subject_b.sub(scene.camera).norm();
    if d_a == 0.0 || d_b == 0.0 {
        return Err(CameraError::CameraAtSubject);
    }
    if libm::fabs(d_a - d_b) <= scene.apex_tolerance * d_a.max(d_b) {
        return Ok(ViewClass::Apex);
    }
    let see_a = scene.sees(scene.subject_a);
    let see_b = scene.sees(scene.subject_b);
    if !see_a && !see_b {
        return Err(CameraError::NoSubjectVisible);
    }
    Ok(match (see_a, see_b) {
        (true, true) if d_a < d_b => ViewClass::ExternalLeft,
        (true, true) => ViewClass::ExternalRight,
        (true, false) => ViewClass::InternalLeft,
        _ => ViewClass::InternalRight,
    })
}
