//! Word pools for synthetic resumes and mock corruptions.

/// One profession: the department it maps to and pools to draw from.
#[derive(Debug, Clone)]
pub struct ProfessionTemplate {
    pub profession: &'static str,
    pub department: &'static str,
    pub titles: &'static [&'static str],
    pub skills: &'static [&'static str],
    pub bullets: &'static [&'static str],
    pub fields_of_study: &'static [&'static str],
}

macro_rules! profession {
    ($p:expr, $d:expr, [$($t:expr),*], [$($s:expr),*], [$($b:expr),*], [$($f:expr),*]) => {
        ProfessionTemplate {
            profession: $p,
            department: $d,
            titles: &[$($t),*],
            skills: &[$($s),*],
            bullets: &[$($b),*],
            fields_of_study: &[$($f),*],
        }
    };
}

/// The 24 default professions.
pub fn default_professions() -> Vec<ProfessionTemplate> {
    vec![
        profession!("HR", "Human Resources",
            ["HR Generalist", "Talent Acquisition Specialist", "HR Business Partner"],
            ["Recruiting", "Onboarding", "Payroll", "Employee Relations", "Workday", "Communication", "Microsoft Excel", "Performance Management"],
            ["Managed full-cycle recruiting for 40 open roles", "Redesigned the onboarding program for new hires", "Resolved employee relations cases within policy timelines", "Administered benefits enrollment for 300 staff", "Built quarterly attrition dashboards for leadership", "Coordinated annual performance review cycles"],
            ["Human Resource Management", "Psychology", "Business Administration"]),
        profession!("Designer", "Design",
            ["Graphic Designer", "UX Designer", "Visual Designer"],
            ["Adobe Photoshop", "Illustrator", "Figma", "Typography", "Wireframing", "User Research", "Sketch", "Branding"],
            ["Designed brand identity systems for regional clients", "Produced wireframes and prototypes for a mobile app", "Ran usability sessions with 25 participants", "Created print collateral for trade shows", "Maintained the shared component library", "Delivered marketing visuals on weekly deadlines"],
            ["Graphic Design", "Fine Arts", "Interaction Design"]),
        profession!("Information-Technology", "Information Technology",
            ["Software Engineer", "Systems Administrator", "DevOps Engineer"],
            ["Python", "Java", "SQL", "Linux", "Docker", "Kubernetes", "Git", "Amazon Web Services", "JavaScript", "Rust"],
            ["Migrated legacy services to containerized deployments", "Reduced API latency by 35 percent through caching", "Automated nightly backups for production databases", "Maintained CI pipelines for twelve repositories", "Implemented role-based access control for internal tools", "Led incident response for critical outages"],
            ["Computer Science", "Information Systems", "Software Engineering"]),
        profession!("Teacher", "Education",
            ["Mathematics Teacher", "Primary School Teacher", "Curriculum Coordinator"],
            ["Lesson Planning", "Classroom Management", "Curriculum Design", "Student Assessment", "Communication", "Google Classroom", "Differentiated Instruction"],
            ["Taught algebra and geometry to four class sections", "Developed a project-based science curriculum", "Raised standardized test pass rates by 12 points", "Mentored two student teachers each semester", "Organized the annual district math fair", "Held weekly tutoring sessions for struggling students"],
            ["Education", "Mathematics", "English Literature"]),
        profession!("Advocate", "Legal",
            ["Associate Attorney", "Legal Counsel", "Paralegal"],
            ["Legal Research", "Contract Drafting", "Litigation", "Negotiation", "Westlaw", "Compliance", "Case Management"],
            ["Drafted commercial contracts and amendments", "Conducted legal research for appellate briefs", "Represented clients in mediation sessions", "Reviewed regulatory filings for compliance gaps", "Managed discovery for complex litigation", "Advised business units on data protection rules"],
            ["Law", "Political Science", "Criminal Justice"]),
        profession!("Business-Development", "Business Development",
            ["Business Development Manager", "Partnerships Lead", "Account Executive"],
            ["Salesforce", "Negotiation", "Market Research", "Lead Generation", "Communication", "Strategic Planning", "Microsoft Excel"],
            ["Closed partnerships worth 2 million in annual revenue", "Built a pipeline of 150 qualified leads", "Negotiated reseller agreements in three regions", "Presented quarterly growth plans to executives", "Expanded the customer base into two new verticals", "Tracked opportunities and forecasts in the CRM"],
            ["Business Administration", "Marketing", "Economics"]),
        profession!("Healthcare", "Healthcare",
            ["Registered Nurse", "Clinical Coordinator", "Medical Assistant"],
            ["Patient Care", "Electronic Health Records", "Phlebotomy", "Triage", "Medication Administration", "Infection Control", "Communication"],
            ["Provided patient care on a 30-bed surgical ward", "Administered medications per physician orders", "Documented assessments in electronic health records", "Trained new staff on infection control protocols", "Coordinated discharge planning with families", "Performed triage in a busy outpatient clinic"],
            ["Nursing", "Health Sciences", "Public Health"]),
        profession!("Fitness", "Fitness",
            ["Personal Trainer", "Fitness Instructor", "Strength Coach"],
            ["Strength Training", "Nutrition Planning", "Group Fitness", "CPR Certified", "Injury Prevention", "Client Assessment"],
            ["Designed individualized training programs for 45 clients", "Led group classes averaging 20 participants", "Conducted fitness assessments and progress reviews", "Created nutrition plans aligned with client goals", "Grew class attendance by 30 percent in one year", "Maintained equipment safety checklists"],
            ["Kinesiology", "Exercise Science", "Sports Management"]),
        profession!("Agriculture", "Agriculture",
            ["Farm Manager", "Agronomist", "Agricultural Technician"],
            ["Crop Management", "Soil Analysis", "Irrigation Systems", "Pest Control", "GIS Mapping", "Equipment Maintenance"],
            ["Managed planting schedules across 800 acres", "Analyzed soil samples to guide fertilizer use", "Installed drip irrigation that cut water use by 20 percent", "Supervised seasonal harvest crews", "Tracked yields with field mapping software", "Implemented integrated pest management practices"],
            ["Agricultural Science", "Agronomy", "Environmental Science"]),
        profession!("BPO", "Operations",
            ["Customer Support Associate", "Team Lead", "Quality Analyst"],
            ["Customer Service", "Call Handling", "Zendesk", "Quality Assurance", "Communication", "Data Entry", "Conflict Resolution"],
            ["Handled 80 inbound support calls per shift", "Maintained a customer satisfaction score above 92 percent", "Audited call recordings against quality guidelines", "Coached a team of 12 support associates", "Documented escalation procedures for billing issues", "Reduced average handle time by 15 percent"],
            ["Business Administration", "Communications", "Commerce"]),
        profession!("Sales", "Sales",
            ["Sales Representative", "Regional Sales Manager", "Inside Sales Specialist"],
            ["Salesforce", "Negotiation", "Cold Calling", "Account Management", "Communication", "Sales Forecasting", "Customer Service"],
            ["Exceeded annual sales quota by 18 percent", "Managed a territory of 60 key accounts", "Ran product demonstrations for enterprise buyers", "Built weekly sales forecasts for the region", "Onboarded and trained five new representatives", "Negotiated renewals with long-term customers"],
            ["Marketing", "Business Administration", "Communications"]),
        profession!("Consultant", "Consulting",
            ["Management Consultant", "Strategy Analyst", "Senior Consultant"],
            ["Strategic Planning", "Data Analysis", "Microsoft Excel", "Stakeholder Management", "Process Improvement", "Project Management", "Communication"],
            ["Delivered operating model reviews for retail clients", "Built financial models to size market opportunities", "Facilitated workshops with executive stakeholders", "Identified cost savings of 4 million across procurement", "Wrote final recommendation decks for board meetings", "Managed workstreams of four analysts"],
            ["Economics", "Business Administration", "Industrial Engineering"]),
        profession!("Digital-Media", "Marketing",
            ["Digital Marketing Specialist", "Content Strategist", "Social Media Manager"],
            ["Search Engine Optimization", "Google Analytics", "Content Writing", "Social Media Marketing", "Email Marketing", "Adobe Photoshop", "Copywriting"],
            ["Grew organic search traffic by 60 percent", "Managed social channels with 200 thousand followers", "Planned the quarterly editorial calendar", "Ran paid campaigns with a 4x return on spend", "Produced weekly performance reports for stakeholders", "Wrote long-form articles for the company blog"],
            ["Journalism", "Marketing", "Media Studies"]),
        profession!("Automobile", "Automotive",
            ["Automotive Technician", "Service Advisor", "Quality Engineer"],
            ["Engine Diagnostics", "Brake Systems", "AutoCAD", "Preventive Maintenance", "Quality Control", "Electrical Systems"],
            ["Diagnosed engine and transmission faults on customer vehicles", "Performed scheduled maintenance on fleet trucks", "Reduced rework rates through root cause analysis", "Advised customers on repair estimates and timelines", "Maintained service records in the dealer system", "Calibrated diagnostic equipment each quarter"],
            ["Automotive Technology", "Mechanical Engineering", "Industrial Technology"]),
        profession!("Chef", "Food Service",
            ["Sous Chef", "Line Cook", "Executive Chef"],
            ["Menu Planning", "Food Safety", "Inventory Management", "Knife Skills", "Catering", "Kitchen Leadership", "Cost Control"],
            ["Designed seasonal menus for a 120-seat restaurant", "Supervised a kitchen brigade of ten cooks", "Cut food waste by 25 percent through better ordering", "Maintained food safety inspection scores of 100", "Catered private events for up to 300 guests", "Trained new cooks on station procedures"],
            ["Culinary Arts", "Hospitality Management", "Nutrition"]),
        profession!("Finance", "Finance",
            ["Financial Analyst", "Finance Manager", "Investment Associate"],
            ["Financial Modeling", "Financial Reporting", "Microsoft Excel", "Budgeting", "Forecasting", "SQL", "Power BI", "Risk Analysis"],
            ["Built three-statement financial models for acquisitions", "Prepared monthly variance analysis for management", "Automated budget consolidation with spreadsheet macros", "Supported the annual external audit", "Presented investment memos to the committee", "Tracked capital expenditure against plan"],
            ["Finance", "Accounting", "Economics"]),
        profession!("Apparel", "Merchandising",
            ["Merchandiser", "Fashion Designer", "Product Developer"],
            ["Trend Forecasting", "Textile Knowledge", "Adobe Photoshop", "Pattern Making", "Vendor Management", "Merchandising"],
            ["Developed seasonal collections with the design team", "Negotiated production terms with overseas vendors", "Managed sample approvals and fit sessions", "Analyzed sell-through data to plan assortments", "Created technical packs for new styles", "Coordinated photo shoots for product launches"],
            ["Fashion Design", "Textile Engineering", "Merchandising"]),
        profession!("Engineering", "Engineering",
            ["Mechanical Engineer", "Civil Engineer", "Project Engineer"],
            ["AutoCAD", "SolidWorks", "MATLAB", "Finite Element Analysis", "Project Management", "Technical Writing", "Python"],
            ["Designed structural components for industrial equipment", "Ran finite element simulations on load-bearing parts", "Prepared technical drawings for fabrication", "Managed vendor selection for a plant expansion", "Led design reviews with cross-functional teams", "Reduced part weight by 12 percent without loss of strength"],
            ["Mechanical Engineering", "Civil Engineering", "Electrical Engineering"]),
        profession!("Accountant", "Accounting",
            ["Staff Accountant", "Senior Accountant", "Accounts Payable Specialist"],
            ["Accounting", "Financial Reporting", "QuickBooks", "Microsoft Excel", "Reconciliation", "Tax Preparation", "Compliance", "Cost Accounting"],
            ["Closed the monthly books within five business days", "Reconciled bank and intercompany accounts", "Prepared quarterly sales tax filings", "Processed 400 vendor invoices per month", "Documented internal controls for the audit team", "Maintained the fixed asset register"],
            ["Accounting", "Finance", "Commerce"]),
        profession!("Construction", "Construction",
            ["Site Supervisor", "Construction Manager", "Estimator"],
            ["Site Management", "Cost Estimation", "Blueprint Reading", "Safety Compliance", "Scheduling", "AutoCAD", "Project Management"],
            ["Supervised crews of 25 on commercial builds", "Prepared cost estimates for tender submissions", "Enforced site safety standards with zero lost-time incidents", "Coordinated subcontractors and material deliveries", "Tracked schedules against critical path plans", "Reviewed blueprints for constructability issues"],
            ["Construction Management", "Civil Engineering", "Architecture"]),
        profession!("Public-Relations", "Communications",
            ["Public Relations Specialist", "Communications Manager", "Media Relations Officer"],
            ["Media Relations", "Press Releases", "Crisis Communication", "Event Planning", "Content Writing", "Communication", "Social Media Marketing"],
            ["Secured coverage in national business outlets", "Wrote press releases for product announcements", "Managed crisis communication during a recall", "Organized launch events for 500 attendees", "Built relationships with trade journalists", "Measured campaign reach and sentiment monthly"],
            ["Public Relations", "Communications", "Journalism"]),
        profession!("Banking", "Banking",
            ["Relationship Manager", "Credit Analyst", "Branch Operations Officer"],
            ["Credit Analysis", "Customer Service", "Risk Analysis", "Compliance", "Microsoft Excel", "Loan Processing", "Financial Reporting"],
            ["Managed a loan portfolio of 30 commercial clients", "Assessed credit applications against lending policy", "Opened new accounts and cross-sold products", "Monitored transactions for compliance red flags", "Prepared branch performance reports", "Resolved escalated customer complaints"],
            ["Finance", "Banking", "Economics"]),
        profession!("Arts", "Arts",
            ["Art Teacher", "Studio Artist", "Gallery Coordinator"],
            ["Painting", "Drawing", "Art History", "Exhibition Planning", "Adobe Photoshop", "Sculpture"],
            ["Exhibited work in three group shows", "Taught studio classes to adult learners", "Curated a community gallery exhibition", "Managed artwork inventory and loans", "Wrote grant applications for public art projects", "Ran weekend workshops for young artists"],
            ["Fine Arts", "Art History", "Studio Art"]),
        profession!("Aviation", "Aviation",
            ["Aircraft Maintenance Technician", "Flight Dispatcher", "Aviation Safety Officer"],
            ["Aircraft Maintenance", "Safety Management Systems", "Flight Planning", "Regulatory Compliance", "Troubleshooting", "Technical Documentation"],
            ["Performed line maintenance on narrow-body aircraft", "Planned dispatch releases for regional routes", "Audited maintenance records against regulations", "Investigated safety reports and tracked corrective actions", "Troubleshot avionics faults under time pressure", "Updated technical manuals after service bulletins"],
            ["Aviation Management", "Aerospace Engineering", "Aviation Maintenance"]),
    ]
}

pub const FIRST_NAMES: &[&str] = &[
    "James", "Maria", "Wei", "Aisha", "Carlos", "Priya", "Liam", "Sofia", "Noah", "Fatima",
    "Ethan", "Yuki", "Omar", "Elena", "Lucas", "Amara", "Mateo", "Hannah", "Ivan", "Chloe",
    "Daniel", "Leila", "Samuel", "Grace", "Arjun", "Nadia", "Oliver", "Zara", "Kofi", "Emma",
];

pub const LAST_NAMES: &[&str] = &[
    "Smith", "Garcia", "Chen", "Khan", "Rodriguez", "Patel", "Johnson", "Rossi", "Williams",
    "Haddad", "Brown", "Tanaka", "Nasser", "Petrova", "Silva", "Okafor", "Lopez", "Muller",
    "Ivanov", "Dubois", "Kim", "Rahman", "Taylor", "Nguyen", "Sharma", "Novak", "Walker",
    "Mensah", "Jensen", "Moreau",
];

pub const EMAIL_DOMAINS: &[&str] = &["example.com", "mail.example.org", "inbox.example.net", "post.example.io"];

pub const COMPANIES: &[&str] = &[
    "Northwind Traders", "Contoso Ltd", "Globex Corporation", "Initech", "Umbrella Health",
    "Stark Logistics", "Wayne Enterprises", "Acme Manufacturing", "Blue Harbor Bank", "Riverbend Foods",
    "Summit Consulting Group", "Pioneer Aerospace", "Greenfield Farms", "Lakeside Academy",
    "Brightline Media", "Redwood Construction", "Silverline Apparel", "Crescent Motors",
    "Harborview Hospital", "Evergreen Legal Partners", "Orbit Software", "Maple Fitness Club",
    "Atlas Public Relations", "Cobalt Design Studio",
];

pub const LOCATIONS: &[&str] = &[
    "New York, NY", "Austin, TX", "Chicago, IL", "Seattle, WA", "Denver, CO", "Boston, MA",
    "Atlanta, GA", "Toronto, ON", "London, UK", "Manchester, UK", "Dublin, Ireland", "Berlin, Germany",
    "Doha, Qatar", "Dubai, UAE", "Singapore", "Sydney, Australia", "Bangalore, India", "Madrid, Spain",
];

/// Location strings that never occur in generated resumes; used for
/// wrong-value corruptions of nested histories.
pub const OUTLIER_LOCATIONS: &[&str] = &[
    "Remote (multiple regional offices)",
    "Head Office, Building 7, Floor 3",
    "Various client sites across the region",
    "Greater Metropolitan Area, Zone 4",
    "Headquarters (see company website)",
];

pub const INSTITUTIONS: &[&str] = &[
    "State University", "University of Leeds", "Riverside Community College", "Northern Institute of Technology",
    "Qatar University", "University of Toronto", "Eastfield Polytechnic", "National University of Singapore",
    "University of Melbourne", "Technical University of Munich", "Lakeshore College", "University of Cape Town",
];

/// Institution strings that never occur in generated resumes.
pub const OUTLIER_INSTITUTIONS: &[&str] = &[
    "Online Learning Platform (self-paced courses)",
    "Independent Study Program, various providers",
    "Extension School of Continuing Education",
    "Professional Certificate Academy (online)",
];

pub const DEGREES: &[&str] = &["BSc", "BA", "MSc", "MA", "MBA", "Diploma", "Associate Degree", "BEng"];

/// Skills not tied to any profession; padding for very long skill lists.
pub const GENERIC_SKILLS: &[&str] = &[
    "Leadership", "Time Management", "Teamwork", "Problem Solving", "Microsoft Office",
    "Public Speaking", "Critical Thinking", "Agile", "Tableau", "Customer Service",
];
