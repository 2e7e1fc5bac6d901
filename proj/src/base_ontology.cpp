// Base ontology, kept in the kb text format so it can be exported verbatim.

#include "base_ontology.hpp"

namespace hcps::detail {

const char* const kBaseOntology = R"(# soa-hitlcps base ontology

# top level
CLASS PhysicalThing
CLASS Human SUBCLASSOF PhysicalThing
CLASS Machine SUBCLASSOF PhysicalThing
CLASS Organization
CLASS Task
CLASS Context
CLASS Capability
CLASS HumanCapability SUBCLASSOF Capability
CLASS MachineCapability SUBCLASSOF Capability
CLASS ServiceProvider
CLASS ServiceConsumer
DISJOINT Human Machine

# service model
CLASS Service
CLASS HumanService SUBCLASSOF Service
CLASS MachineService SUBCLASSOF Service
CLASS ServiceProfile
CLASS ProcessModel
CLASS ServiceGrounding
CLASS ServiceType
CLASS AtomicService SUBCLASSOF ServiceType
CLASS CompositeService SUBCLASSOF ServiceType
CLASS AdaptationService SUBCLASSOF CompositeService
CLASS SensingService
CLASS ActuatingService
CLASS CommunicatingService
CLASS ProcessingService
CLASS Input
CLASS Output
CLASS Precondition
CLASS Effect
CLASS Property
CLASS Limitation
CLASS QoS

# human capability
CLASS Characteristic
CLASS Preference
CLASS Ability
CLASS PerformanceFactor
CLASS Qualification
CLASS Skill
CLASS Knowledge
CLASS Education
CLASS Experience
CLASS Potential
CLASS PotentialService SUBCLASSOF Potential

# machine capability
CLASS MachineSpecification
CLASS Hardware
CLASS Software

# physical things, tasks, context
PROPERTY provides DOMAIN PhysicalThing RANGE Service
PROPERTY consumes DOMAIN PhysicalThing RANGE Service
PROPERTY hasCapability DOMAIN PhysicalThing RANGE Capability
PROPERTY belongsTo DOMAIN PhysicalThing RANGE Organization
PROPERTY performsTask DOMAIN PhysicalThing RANGE Task
PROPERTY hasContext DOMAIN PhysicalThing RANGE Context

# services
PROPERTY providedBy DOMAIN Service RANGE PhysicalThing
PROPERTY realizesTask DOMAIN Service RANGE Task
PROPERTY presents DOMAIN Service RANGE ServiceProfile
PROPERTY describedBy DOMAIN Service RANGE ProcessModel
PROPERTY supports DOMAIN Service RANGE ServiceGrounding
PROPERTY hasServiceType DOMAIN ServiceProfile RANGE ServiceType
PROPERTY hasInput DOMAIN ServiceProfile RANGE Input
PROPERTY hasOutput DOMAIN ServiceProfile RANGE Output
PROPERTY hasPrecondition DOMAIN ServiceProfile RANGE Precondition
PROPERTY hasEffect DOMAIN ServiceProfile RANGE Effect
PROPERTY hasProperty DOMAIN ServiceProfile RANGE Property
PROPERTY hasLimitation DOMAIN ServiceProfile RANGE Limitation
PROPERTY includeCapability DOMAIN Property RANGE Capability
PROPERTY includeContext DOMAIN Property RANGE Context
PROPERTY includeQoS DOMAIN Property RANGE QoS
PROPERTY composedOf DOMAIN CompositeService RANGE Service
PROPERTY limitsContext DOMAIN Limitation RANGE Context

# human capability
PROPERTY hasCharacteristic DOMAIN HumanCapability RANGE Characteristic
PROPERTY hasQualification DOMAIN HumanCapability RANGE Qualification
PROPERTY hasPotential DOMAIN HumanCapability RANGE Potential
PROPERTY hasPreference DOMAIN HumanCapability RANGE Preference
PROPERTY hasAbility DOMAIN HumanCapability RANGE Ability
PROPERTY hasPerformanceFactor DOMAIN HumanCapability RANGE PerformanceFactor
PROPERTY hasHumanSkill DOMAIN HumanCapability RANGE Skill
PROPERTY hasHumanKnowledge DOMAIN HumanCapability RANGE Knowledge
PROPERTY hasEducation DOMAIN HumanCapability RANGE Education
PROPERTY hasExperience DOMAIN Capability RANGE Experience
PROPERTY hasPotentialService DOMAIN Potential RANGE PotentialService
PROPERTY requiresSkill DOMAIN PotentialService RANGE Skill
PROPERTY requiresKnowledge DOMAIN PotentialService RANGE Knowledge
PROPERTY experienceOfService DOMAIN Experience RANGE Service
PROPERTY ratedBy DOMAIN Experience RANGE PhysicalThing
PROPERTY hasScaleEntry DOMAIN Capability RANGE Characteristic
PROPERTY scaleOf DOMAIN Characteristic RANGE Qualification

# machine capability
PROPERTY hasSpecification DOMAIN MachineCapability RANGE MachineSpecification
PROPERTY hasHardware DOMAIN MachineSpecification RANGE Hardware
PROPERTY hasSoftware DOMAIN MachineSpecification RANGE Software
PROPERTY hasMachineSkill DOMAIN MachineCapability RANGE Skill
PROPERTY hasMachineKnowledge DOMAIN MachineCapability RANGE Knowledge

# data properties
PROPERTY hasStatus DOMAIN Service RANGE xsd:string
PROPERTY hasDegreeOfParallelism DOMAIN ServiceProfile RANGE xsd:integer
PROPERTY hasReputation DOMAIN QoS RANGE xsd:decimal
PROPERTY hasCost DOMAIN QoS RANGE xsd:decimal
PROPERTY hasResponseTime DOMAIN QoS RANGE xsd:decimal
PROPERTY groundingMailbox DOMAIN ServiceGrounding RANGE xsd:string
PROPERTY parameterName DOMAIN Input RANGE xsd:string
PROPERTY parameterType DOMAIN Input RANGE xsd:string
PROPERTY patternText DOMAIN Precondition RANGE xsd:string
PROPERTY effectMode DOMAIN Effect RANGE xsd:string
PROPERTY limitationKind DOMAIN Limitation RANGE xsd:string
PROPERTY windowStart DOMAIN Limitation RANGE xsd:integer
PROPERTY windowEnd DOMAIN Limitation RANGE xsd:integer
PROPERTY maxDistance DOMAIN Limitation RANGE xsd:decimal
PROPERTY coordX DOMAIN Context RANGE xsd:decimal
PROPERTY coordY DOMAIN Context RANGE xsd:decimal
PROPERTY scaleValue DOMAIN Characteristic RANGE xsd:integer
PROPERTY preferenceDimension DOMAIN Preference RANGE xsd:string
PROPERTY preferenceValue DOMAIN Preference RANGE xsd:string
PROPERTY hasRating DOMAIN Experience RANGE xsd:decimal
PROPERTY hasCriterionScore DOMAIN Experience RANGE xsd:string
PROPERTY atTime DOMAIN Experience RANGE xsd:integer
PROPERTY requiredSkillLevel DOMAIN PotentialService RANGE xsd:integer
PROPERTY minExperienceCount DOMAIN PotentialService RANGE xsd:integer
PROPERTY templateProfile DOMAIN PotentialService RANGE xsd:string

# accuracy axioms
AXIOM ( PhysicalThing AND ( hasCapability SOME HumanCapability ) ) SUBCLASSOF Human
AXIOM ( Service AND ( providedBy SOME Human ) ) SUBCLASSOF HumanService

# OntoClean metaproperties
META PhysicalThing +R +I +U
META Human +R +I +U
META Machine +R +I +U
META Organization +R +I +U
META Task +R +I -U
META Context +R +I -U
META Capability +R +I -U
META HumanCapability +R +I -U
META MachineCapability +R +I -U
META ServiceProvider ~R -I ~U
META ServiceConsumer ~R -I ~U
META Service +R +I -U
META HumanService +R +I -U
META MachineService +R +I -U
META ServiceProfile +R +I -U
META ProcessModel +R +I -U
META ServiceGrounding +R +I -U
META ServiceType +R +I -U
META AtomicService +R +I -U
META CompositeService +R +I -U
META AdaptationService +R +I -U
META SensingService +R +I -U
META ActuatingService +R +I -U
META CommunicatingService +R +I -U
META ProcessingService +R +I -U
META Input +R +I -U
META Output +R +I -U
META Precondition +R +I -U
META Effect +R +I -U
META Property +R +I -U
META Limitation +R +I -U
META QoS +R +I -U
META Characteristic +R +I -U
META Preference ~R +I -U
META Ability +R +I -U
META PerformanceFactor +R +I -U
META Qualification +R +I -U
META Skill +R +I -U
META Knowledge +R +I -U
META Education +R +I -U
META Experience +R +I -U
META Potential ~R +I -U
META PotentialService ~R +I -U
META MachineSpecification +R +I -U
META Hardware +R +I +U
META Software +R +I -U

# taxonomy: skills
INDIVIDUAL Active_Listening TYPE Skill
INDIVIDUAL Cardiac_output_CO_monitoring_units_or_accessories TYPE Skill
INDIVIDUAL Complex_Problem_Solving TYPE Skill
INDIVIDUAL Conversational_Response TYPE Skill
INDIVIDUAL Coordination TYPE Skill
INDIVIDUAL Critical_Thinking TYPE Skill
INDIVIDUAL Equipment_Maintenance TYPE Skill
INDIVIDUAL Instructing TYPE Skill
INDIVIDUAL Judgment_and_Decision_Making TYPE Skill
INDIVIDUAL Monitoring TYPE Skill
INDIVIDUAL Operation_Monitoring TYPE Skill
INDIVIDUAL Service_Orientation TYPE Skill
INDIVIDUAL Signal_Acquisition TYPE Skill
INDIVIDUAL Social_Perceptiveness TYPE Skill
INDIVIDUAL Troubleshooting TYPE Skill

# taxonomy: knowledge
INDIVIDUAL Biology TYPE Knowledge
INDIVIDUAL Chemistry TYPE Knowledge
INDIVIDUAL Computers_and_Electronics TYPE Knowledge
INDIVIDUAL Customer_and_Personal_Service TYPE Knowledge
INDIVIDUAL Education_and_Training TYPE Knowledge
INDIVIDUAL English_Language TYPE Knowledge
INDIVIDUAL Medicine_and_Dentistry TYPE Knowledge
INDIVIDUAL Psychology TYPE Knowledge
INDIVIDUAL Therapy_and_Counseling TYPE Knowledge

# taxonomy: abilities
INDIVIDUAL Arm_Hand_Steadiness TYPE Ability
INDIVIDUAL Deductive_Reasoning TYPE Ability
INDIVIDUAL Finger_Dexterity TYPE Ability
INDIVIDUAL Near_Vision TYPE Ability
INDIVIDUAL Oral_Comprehension TYPE Ability
INDIVIDUAL Oral_Expression TYPE Ability
INDIVIDUAL Problem_Sensitivity TYPE Ability
INDIVIDUAL Selective_Attention TYPE Ability
INDIVIDUAL Speech_Recognition TYPE Ability

# taxonomy: performance factors (work values and work styles)
INDIVIDUAL Achievement TYPE PerformanceFactor
INDIVIDUAL Attention_to_Detail TYPE PerformanceFactor
INDIVIDUAL Concern_for_Others TYPE PerformanceFactor
INDIVIDUAL Dependability TYPE PerformanceFactor
INDIVIDUAL Fatigue TYPE PerformanceFactor
INDIVIDUAL Self_Control TYPE PerformanceFactor
INDIVIDUAL Stress_Tolerance TYPE PerformanceFactor
INDIVIDUAL Workload TYPE PerformanceFactor

# taxonomy: education levels
INDIVIDUAL High_School_Diploma TYPE Education
INDIVIDUAL Post_Secondary_Certificate TYPE Education
INDIVIDUAL Associates_Degree TYPE Education
INDIVIDUAL Bachelors_Degree TYPE Education
INDIVIDUAL Masters_Degree TYPE Education
INDIVIDUAL Doctoral_Degree TYPE Education
)";

}  // namespace hcps::detail
